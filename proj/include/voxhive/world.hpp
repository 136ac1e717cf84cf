// Deterministic voxel-grid environment: block registry, world state, agent
// stepping and multi-modal observation. Coordinates: x in [0,W), z in [0,L)
// horizontal, y in [0,H) vertical. Compass: north = -z, east = +x,
// south = +z, west = -x.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "voxhive/error.hpp"

namespace voxhive {

struct Vec3 {
    int x = 0, y = 0, z = 0;
    friend bool operator==(const Vec3&, const Vec3&) = default;
    friend auto operator<=>(const Vec3&, const Vec3&) = default;
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
};

using Column = std::pair<int, int>; // (x, z)

enum class DirBucket { North, East, South, West, Up, Down };

inline const char* to_string(DirBucket d) {
    switch (d) {
        case DirBucket::North: return "N";
        case DirBucket::East: return "E";
        case DirBucket::South: return "S";
        case DirBucket::West: return "W";
        case DirBucket::Up: return "Up";
        default: return "Down";
    }
}

// Axis steps in tie-break order N, E, S, W, Up, Down.
inline const std::array<Vec3, 6>& axis_dirs() {
    static const std::array<Vec3, 6> dirs = {Vec3{0, 0, -1}, Vec3{1, 0, 0}, Vec3{0, 0, 1},
                                             Vec3{-1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, -1, 0}};
    return dirs;
}

inline DirBucket bucket_of(Vec3 delta) {
    int ax = std::abs(delta.x), ay = std::abs(delta.y), az = std::abs(delta.z);
    // Dominant axis, preferring z, then x, then y on ties.
    if (az >= ax && az >= ay) return delta.z <= 0 ? DirBucket::North : DirBucket::South;
    if (ax >= ay) return delta.x >= 0 ? DirBucket::East : DirBucket::West;
    return delta.y >= 0 ? DirBucket::Up : DirBucket::Down;
}

inline int chebyshev(Vec3 a, Vec3 b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

// ---------------------------------------------------------------------------
// Blocks

struct BlockType {
    int id = 0;
    std::string name;
    bool solid = false;
    bool mineable = false;
    std::string audio_event; // empty = silent
    int audio_range = 0;     // blocks, Chebyshev
};

class BlockRegistry {
public:
    explicit BlockRegistry(std::vector<BlockType> blocks) : blocks_(std::move(blocks)) {
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            require(blocks_[i].id == static_cast<int>(i), "ConfigError", "block ids must be dense");
            require(!by_name_.count(blocks_[i].name), "ConfigError", "duplicate block name");
            by_name_[blocks_[i].name] = blocks_[i].id;
        }
        require(!blocks_.empty() && !blocks_[0].solid && !blocks_[0].mineable, "ConfigError",
                "block 0 must be non-solid, non-mineable air");
    }

    int size() const { return static_cast<int>(blocks_.size()); }
    const BlockType& at(int id) const {
        require(id >= 0 && id < size(), "ConfigError", "unknown block id " + std::to_string(id));
        return blocks_[id];
    }
    bool valid(int id) const { return id >= 0 && id < size(); }
    const std::string& name(int id) const { return at(id).name; }
    int id_of(const std::string& name) const {
        auto it = by_name_.find(name);
        require(it != by_name_.end(), "ConfigError", "unknown block name " + name);
        return it->second;
    }
    bool has(const std::string& name) const { return by_name_.count(name) > 0; }

private:
    std::vector<BlockType> blocks_;
    std::map<std::string, int> by_name_;
};

inline const BlockRegistry& default_blocks() {
    static const BlockRegistry reg({
        {0, "air", false, false, "", 0},
        {1, "bedrock", true, false, "", 0},
        {2, "stone", true, true, "", 0},
        {3, "dirt", true, true, "", 0},
        {4, "grass", true, true, "", 0},
        {5, "sand", true, true, "", 0},
        {6, "wood", true, true, "", 0},
        {7, "leaves", true, true, "", 0},
        {8, "brick", true, true, "", 0},
        {9, "diamond", true, true, "", 0},
        {10, "iron", true, true, "", 0},
        {11, "gold", true, true, "", 0},
        {12, "water", false, false, "", 0},
        {13, "beacon", true, true, "hum", 12},
        {14, "bell", true, true, "ring", 12},
    });
    return reg;
}

inline const std::vector<std::string>& biome_names() {
    static const std::vector<std::string> names = {"plains", "forest", "desert", "mountain"};
    return names;
}

// ---------------------------------------------------------------------------
// Agents and world

enum class Role { Manager, Conductor, Actor };

inline const char* to_string(Role r) {
    switch (r) {
        case Role::Manager: return "manager";
        case Role::Conductor: return "conductor";
        default: return "actor";
    }
}

inline Role role_from(const std::string& s) {
    if (s == "manager") return Role::Manager;
    if (s == "conductor") return Role::Conductor;
    if (s == "actor") return Role::Actor;
    fail("ConfigError", "unknown role " + s);
}

struct AgentBody {
    int agent_id = 0;
    Vec3 pos;
    std::map<int, int> inventory; // block id -> count, counts >= 0
    Role role = Role::Conductor;
    friend bool operator==(const AgentBody&, const AgentBody&) = default;
};

struct WorldState {
    int W = 0, L = 0, H = 0;
    std::vector<std::int16_t> grid;   // (x*L + z)*H + y
    std::vector<std::uint8_t> biome;  // x*L + z
    std::vector<AgentBody> agents;
    long long tick = 0;
    std::uint64_t seed = 0;
    std::vector<Vec3> audio_sources;  // sorted; maintained by gen/step
    const BlockRegistry* blocks = &default_blocks();

    bool in_bounds(Vec3 p) const {
        return p.x >= 0 && p.x < W && p.y >= 0 && p.y < H && p.z >= 0 && p.z < L;
    }
    int idx(Vec3 p) const { return (p.x * L + p.z) * H + p.y; }
    int at(Vec3 p) const { return grid[idx(p)]; }
    void set(Vec3 p, int id) {
        int old = grid[idx(p)];
        if (old == id) return;
        if (!blocks->at(old).audio_event.empty()) erase_audio(p);
        grid[idx(p)] = static_cast<std::int16_t>(id);
        if (!blocks->at(id).audio_event.empty()) insert_audio(p);
    }
    bool solid(Vec3 p) const { return in_bounds(p) && blocks->at(at(p)).solid; }
    const std::string& biome_at(int x, int z) const { return biome_names()[biome[x * L + z]]; }

    AgentBody* find_agent(int id) {
        for (auto& a : agents)
            if (a.agent_id == id) return &a;
        return nullptr;
    }
    const AgentBody* find_agent(int id) const {
        return const_cast<WorldState*>(this)->find_agent(id);
    }

    int count_block(int id) const {
        return static_cast<int>(std::count(grid.begin(), grid.end(), id));
    }

    friend bool operator==(const WorldState& a, const WorldState& b) {
        return a.W == b.W && a.L == b.L && a.H == b.H && a.grid == b.grid && a.biome == b.biome &&
               a.agents == b.agents && a.tick == b.tick && a.seed == b.seed;
    }

private:
    void insert_audio(Vec3 p) {
        auto it = std::lower_bound(audio_sources.begin(), audio_sources.end(), p);
        audio_sources.insert(it, p);
    }
    void erase_audio(Vec3 p) {
        auto it = std::lower_bound(audio_sources.begin(), audio_sources.end(), p);
        if (it != audio_sources.end() && *it == p) audio_sources.erase(it);
    }
};

inline WorldState make_empty_world(int W, int L, int H, std::uint64_t seed = 0) {
    require(W >= 1 && L >= 1 && H >= 1, "ConfigError", "world dims must be positive");
    WorldState w;
    w.W = W;
    w.L = L;
    w.H = H;
    w.seed = seed;
    w.grid.assign(static_cast<std::size_t>(W) * L * H, 0);
    w.biome.assign(static_cast<std::size_t>(W) * L, 0);
    return w;
}

// ---------------------------------------------------------------------------
// Observation

// 2D grid of block ids (top/side projections, image goals, memory keys).
struct ViewGrid {
    int w = 0, h = 0;
    std::vector<std::int16_t> cells;
    ViewGrid() = default;
    ViewGrid(int w_, int h_) : w(w_), h(h_), cells(static_cast<std::size_t>(w_) * h_, 0) {}
    std::int16_t& at(int i, int j) { return cells[i * h + j]; }
    std::int16_t at(int i, int j) const { return cells[i * h + j]; }
    friend bool operator==(const ViewGrid&, const ViewGrid&) = default;
    friend auto operator<=>(const ViewGrid&, const ViewGrid&) = default;
};

struct AudioCue {
    std::string event;
    DirBucket direction = DirBucket::North;
    int distance = 0; // Chebyshev, <= source range
    friend bool operator==(const AudioCue&, const AudioCue&) = default;
};

inline constexpr int kVisionRadius = 2; // 5x5x5 patch

struct Observation {
    int agent_id = 0;
    int radius = kVisionRadius;
    std::vector<std::int16_t> s_v;        // (2r+1)^3, (dx,dy,dz) lexicographic
    ViewGrid top_view;                    // (2r+1)x(2r+1) top projection of the patch
    std::vector<AudioCue> s_a;
    std::map<std::string, std::string> s_p;

    // Structured duplicates of s_p fields, for programmatic consumers.
    Vec3 pos;
    int world_w = 0, world_l = 0, world_h = 0;
    std::string biome;
    std::map<int, int> inventory;
    long long tick = 0;

    int patch_at(Vec3 delta) const {
        int n = 2 * radius + 1;
        return s_v[((delta.x + radius) * n + (delta.y + radius)) * n + (delta.z + radius)];
    }
    friend bool operator==(const Observation&, const Observation&) = default;
};

inline Observation observe(const WorldState& w, int agent_id) {
    const AgentBody* a = w.find_agent(agent_id);
    require(a != nullptr, "UnknownAgent", "agent " + std::to_string(agent_id));
    Observation o;
    o.agent_id = agent_id;
    o.radius = kVisionRadius;
    const int r = o.radius, n = 2 * r + 1;
    o.s_v.assign(static_cast<std::size_t>(n) * n * n, 0);
    for (int dx = -r; dx <= r; ++dx)
        for (int dy = -r; dy <= r; ++dy)
            for (int dz = -r; dz <= r; ++dz) {
                Vec3 p = a->pos + Vec3{dx, dy, dz};
                int v = w.in_bounds(p) ? w.at(p) : 0; // out of bounds reads as air
                o.s_v[((dx + r) * n + (dy + r)) * n + (dz + r)] = static_cast<std::int16_t>(v);
            }
    o.top_view = ViewGrid(n, n);
    for (int dx = -r; dx <= r; ++dx)
        for (int dz = -r; dz <= r; ++dz) {
            int v = 0;
            for (int dy = r; dy >= -r; --dy) {
                int c = o.s_v[((dx + r) * n + (dy + r)) * n + (dz + r)];
                if (c != 0) {
                    v = c;
                    break;
                }
            }
            o.top_view.at(dx + r, dz + r) = static_cast<std::int16_t>(v);
        }
    for (const Vec3& src : w.audio_sources) {
        const BlockType& b = w.blocks->at(w.at(src));
        if (b.audio_event.empty()) continue;
        int d = chebyshev(src, a->pos);
        if (d <= b.audio_range)
            o.s_a.push_back({b.audio_event, bucket_of(src - a->pos), d});
    }
    o.pos = a->pos;
    o.world_w = w.W;
    o.world_l = w.L;
    o.world_h = w.H;
    o.biome = w.biome_at(a->pos.x, a->pos.z);
    o.inventory = a->inventory;
    o.tick = w.tick;
    std::ostringstream poss;
    poss << a->pos.x << ' ' << a->pos.y << ' ' << a->pos.z;
    o.s_p["position"] = poss.str();
    std::string inv;
    for (const auto& [id, count] : a->inventory)
        if (count > 0) inv += (inv.empty() ? "" : " ") + w.blocks->name(id) + ":" + std::to_string(count);
    o.s_p["inventory"] = inv.empty() ? "-" : inv;
    o.s_p["biome"] = o.biome;
    o.s_p["tick"] = std::to_string(w.tick);
    o.s_p["dims"] = std::to_string(w.W) + " " + std::to_string(w.L) + " " + std::to_string(w.H);
    return o;
}

// ---------------------------------------------------------------------------
// Actions and stepping

struct MoveAction { Vec3 dir; };
struct MoveToAction { int x = 0, z = 0; };
struct MineAction { Vec3 offset; };
struct PlaceAction { Vec3 offset; int block = 0; };
struct AnnounceAction { std::vector<std::string> tags; };
struct NoOpAction {};

using Action = std::variant<MoveAction, MoveToAction, MineAction, PlaceAction, AnnounceAction, NoOpAction>;

inline constexpr int kMoveToCap = 50; // blocks per invocation

enum class EventKind { Moved, PathMoved, Blocked, Mined, Placed, Announced, InvalidPlacement, InvalidMine, NoOp };

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Moved: return "moved";
        case EventKind::PathMoved: return "path_moved";
        case EventKind::Blocked: return "blocked";
        case EventKind::Mined: return "mined";
        case EventKind::Placed: return "placed";
        case EventKind::Announced: return "announced";
        case EventKind::InvalidPlacement: return "invalid_placement";
        case EventKind::InvalidMine: return "invalid_mine";
        default: return "noop";
    }
}

struct Event {
    EventKind kind = EventKind::NoOp;
    int agent = 0;
    Vec3 from{}, to{};
    int block = 0;
    std::vector<Vec3> path;
    std::vector<std::string> tags;
    std::string note;
};

// BFS over columns walkable at height y (non-solid voxel at that height).
// Neighbor order N, E, S, W makes shortest-path tie-breaking deterministic.
// Returns the path from (after start) to target, empty if target == start,
// nullopt if unreachable.
inline std::optional<std::vector<Column>> column_path(const WorldState& w, Column from, Column to, int y) {
    auto walkable = [&](int x, int z) {
        Vec3 p{x, y, z};
        return w.in_bounds(p) && !w.blocks->at(w.at(p)).solid;
    };
    if (!walkable(to.first, to.second) || !walkable(from.first, from.second)) return std::nullopt;
    if (from == to) return std::vector<Column>{};
    std::vector<int> parent(static_cast<std::size_t>(w.W) * w.L, -1);
    auto ci = [&](Column c) { return c.first * w.L + c.second; };
    std::deque<Column> q{from};
    parent[ci(from)] = ci(from);
    while (!q.empty()) {
        Column c = q.front();
        q.pop_front();
        if (c == to) break;
        for (const Vec3& d : axis_dirs()) {
            if (d.y != 0) continue;
            Column nc{c.first + d.x, c.second + d.z};
            if (nc.first < 0 || nc.first >= w.W || nc.second < 0 || nc.second >= w.L) continue;
            if (!walkable(nc.first, nc.second) || parent[ci(nc)] != -1) continue;
            parent[ci(nc)] = ci(c);
            q.push_back(nc);
        }
    }
    if (parent[ci(to)] == -1) return std::nullopt;
    std::vector<Column> path;
    for (Column c = to; c != from; c = Column{parent[ci(c)] / w.L, parent[ci(c)] % w.L})
        path.push_back(c);
    std::reverse(path.begin(), path.end());
    return path;
}

// Applies one action for one agent. The tick always advances by one; invalid
// actions leave the rest of the world untouched and surface as events.
inline std::vector<Event> step(WorldState& w, int agent_id, const Action& action) {
    AgentBody* a = w.find_agent(agent_id);
    require(a != nullptr, "UnknownAgent", "agent " + std::to_string(agent_id));
    std::vector<Event> events;
    auto emit = [&](Event e) {
        e.agent = agent_id;
        events.push_back(std::move(e));
    };

    if (const auto* m = std::get_if<MoveAction>(&action)) {
        Vec3 d = m->dir;
        require(std::abs(d.x) + std::abs(d.y) + std::abs(d.z) == 1, "ConfigError", "Move must be one axis step");
        Vec3 to = a->pos + d;
        if (!w.in_bounds(to) || w.solid(to)) {
            emit({EventKind::Blocked, 0, a->pos, to});
        } else {
            Event e{EventKind::Moved, 0, a->pos, to};
            a->pos = to;
            emit(std::move(e));
        }
    } else if (const auto* mt = std::get_if<MoveToAction>(&action)) {
        auto path = column_path(w, {a->pos.x, a->pos.z}, {mt->x, mt->z}, a->pos.y);
        if (!path) {
            emit({EventKind::Blocked, 0, a->pos, {mt->x, a->pos.y, mt->z}, 0, {}, {}, "unreachable"});
        } else {
            std::size_t n = std::min<std::size_t>(path->size(), kMoveToCap);
            Event e{EventKind::PathMoved, 0, a->pos, a->pos};
            for (std::size_t i = 0; i < n; ++i)
                e.path.push_back({(*path)[i].first, a->pos.y, (*path)[i].second});
            if (!e.path.empty()) a->pos = e.path.back();
            e.to = a->pos;
            if (n < path->size()) e.note = "truncated";
            emit(std::move(e));
        }
    } else if (const auto* mi = std::get_if<MineAction>(&action)) {
        Vec3 off = mi->offset;
        Vec3 p = a->pos + off;
        bool adjacent = std::abs(off.x) + std::abs(off.y) + std::abs(off.z) == 1;
        if (!adjacent || !w.in_bounds(p) || !w.blocks->at(w.at(p)).mineable) {
            emit({EventKind::InvalidMine, 0, a->pos, p});
        } else {
            int id = w.at(p);
            w.set(p, 0);
            a->inventory[id] += 1;
            emit({EventKind::Mined, 0, a->pos, p, id});
        }
    } else if (const auto* pl = std::get_if<PlaceAction>(&action)) {
        Vec3 off = pl->offset;
        Vec3 p = a->pos + off;
        bool adjacent = std::abs(off.x) + std::abs(off.y) + std::abs(off.z) == 1;
        bool occupied_by_agent = false;
        for (const auto& other : w.agents)
            if (other.pos == p) occupied_by_agent = true;
        auto inv = a->inventory.find(pl->block);
        bool have = inv != a->inventory.end() && inv->second > 0;
        if (!adjacent || !w.in_bounds(p) || w.at(p) != 0 || occupied_by_agent || !have ||
            !w.blocks->valid(pl->block) || pl->block == 0) {
            emit({EventKind::InvalidPlacement, 0, a->pos, p, pl->block});
        } else {
            inv->second -= 1;
            w.set(p, pl->block);
            emit({EventKind::Placed, 0, a->pos, p, pl->block});
        }
    } else if (const auto* an = std::get_if<AnnounceAction>(&action)) {
        emit({EventKind::Announced, 0, a->pos, a->pos, 0, {}, an->tags});
    } else {
        emit({EventKind::NoOp, 0, a->pos, a->pos});
    }
    w.tick += 1;
    return events;
}

inline std::string action_to_string(const Action& a) {
    std::ostringstream out;
    if (const auto* m = std::get_if<MoveAction>(&a))
        out << "move " << m->dir.x << ' ' << m->dir.y << ' ' << m->dir.z;
    else if (const auto* mt = std::get_if<MoveToAction>(&a))
        out << "move_to " << mt->x << ' ' << mt->z;
    else if (const auto* mi = std::get_if<MineAction>(&a))
        out << "mine " << mi->offset.x << ' ' << mi->offset.y << ' ' << mi->offset.z;
    else if (const auto* pl = std::get_if<PlaceAction>(&a))
        out << "place " << pl->offset.x << ' ' << pl->offset.y << ' ' << pl->offset.z << ' ' << pl->block;
    else if (const auto* an = std::get_if<AnnounceAction>(&a))
        out << "announce " << join(std::vector<std::string>(an->tags.begin(), an->tags.end()), ",");
    else
        out << "noop";
    return out.str();
}

// ---------------------------------------------------------------------------
// Snapshot serialization: header, tick, biome rows, one line per non-air
// voxel "x y z block_id" (ascending x, z, y), one line per agent. Integers
// only, so round-trips are bit-exact.

inline void save_snapshot(const WorldState& w, std::ostream& out) {
    out << "dims " << w.W << ' ' << w.L << ' ' << w.H << ' ' << w.seed << '\n';
    out << "tick " << w.tick << '\n';
    for (int z = 0; z < w.L; ++z) {
        out << "biomerow " << z;
        for (int x = 0; x < w.W; ++x) out << ' ' << w.biome_at(x, z);
        out << '\n';
    }
    for (int x = 0; x < w.W; ++x)
        for (int z = 0; z < w.L; ++z)
            for (int y = 0; y < w.H; ++y) {
                int v = w.at({x, y, z});
                if (v != 0) out << x << ' ' << y << ' ' << z << ' ' << v << '\n';
            }
    for (const auto& a : w.agents) {
        out << "agent " << a.agent_id << ' ' << to_string(a.role) << ' ' << a.pos.x << ' '
            << a.pos.y << ' ' << a.pos.z;
        for (const auto& [id, count] : a.inventory)
            if (count > 0) out << ' ' << id << ':' << count;
        out << '\n';
    }
}

inline std::string snapshot_string(const WorldState& w) {
    std::ostringstream out;
    save_snapshot(w, out);
    return out.str();
}

inline WorldState load_snapshot(std::istream& in, const BlockRegistry& blocks = default_blocks()) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "ConfigError", "empty snapshot");
    std::istringstream head(line);
    std::string tag;
    int W, L, H;
    std::uint64_t seed;
    head >> tag >> W >> L >> H >> seed;
    require(tag == "dims" && head && W > 0 && L > 0 && H > 0, "ConfigError", "bad snapshot header");
    WorldState w = make_empty_world(W, L, H, seed);
    w.blocks = &blocks;
    auto biome_id = [&](const std::string& name) {
        for (std::size_t i = 0; i < biome_names().size(); ++i)
            if (biome_names()[i] == name) return static_cast<std::uint8_t>(i);
        fail("ConfigError", "unknown biome " + name);
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string first;
        ls >> first;
        if (first == "tick") {
            ls >> w.tick;
        } else if (first == "biomerow") {
            int z;
            ls >> z;
            for (int x = 0; x < W; ++x) {
                std::string name;
                ls >> name;
                w.biome[x * L + z] = biome_id(name);
            }
        } else if (first == "agent") {
            AgentBody a;
            std::string role;
            ls >> a.agent_id >> role >> a.pos.x >> a.pos.y >> a.pos.z;
            a.role = role_from(role);
            std::string pair;
            while (ls >> pair) {
                auto colon = pair.find(':');
                require(colon != std::string::npos, "ConfigError", "bad inventory token " + pair);
                a.inventory[std::stoi(pair.substr(0, colon))] = std::stoi(pair.substr(colon + 1));
            }
            w.agents.push_back(std::move(a));
        } else {
            int x = std::stoi(first), y, z, id;
            ls >> y >> z >> id;
            require(w.in_bounds({x, y, z}), "ConfigError", "voxel out of bounds in snapshot");
            require(blocks.valid(id), "ConfigError", "invalid block id in snapshot");
            w.set({x, y, z}, id);
        }
    }
    return w;
}

inline WorldState load_snapshot_string(const std::string& s, const BlockRegistry& blocks = default_blocks()) {
    std::istringstream in(s);
    return load_snapshot(in, blocks);
}

} // namespace voxhive
