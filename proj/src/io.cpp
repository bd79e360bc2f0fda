#include "interdep/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace interdep {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

class CsvReader {
public:
    CsvReader(const std::filesystem::path& path, std::string_view first_column)
        : name_(path.filename().string()), in_(path), first_column_(first_column) {
        if (!in_) throw IoError(path.string() + ": cannot open");
    }

    /// Next data row; false at end of file.
    bool next(std::vector<std::string_view>& fields) {
        while (std::getline(in_, line_)) {
            ++line_no_;
            const std::string_view body = trim(line_);
            if (body.empty() || body.front() == '#') continue;
            fields.clear();
            std::string_view rest = body;
            for (;;) {
                const auto comma = rest.find(',');
                fields.push_back(trim(rest.substr(0, comma)));
                if (comma == std::string_view::npos) break;
                rest.remove_prefix(comma + 1);
            }
            if (!seen_row_ && fields.front() == first_column_) {
                seen_row_ = true;
                continue;  // header
            }
            seen_row_ = true;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw IoError(name_ + ":" + std::to_string(line_no_) + ": " + msg);
    }
    std::string where() const { return name_ + ":" + std::to_string(line_no_); }

    std::uint32_t index(std::string_view s) const {
        std::uint32_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            fail("bad node index '" + std::string(s) + "'");
        return v;
    }
    double number(std::string_view s) const {
        double v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            fail("bad number '" + std::string(s) + "'");
        return v;
    }
    Side side(std::string_view s) const {
        const auto v = parse_side(s);
        if (!v) fail("unknown side '" + std::string(s) + "'");
        return *v;
    }

private:
    std::string name_;
    std::ifstream in_;
    std::string line_;
    std::string_view first_column_;
    std::size_t line_no_ = 0;
    bool seen_row_ = false;
};

struct SideTable {
    std::map<std::uint32_t, Role> roles;
    std::map<std::uint32_t, Point> coords;
};

}  // namespace

LoadedTopology load_topology(const std::filesystem::path& nodes_csv,
                             const std::filesystem::path& edges_csv,
                             const std::filesystem::path& deps_csv) {
    LoadedTopology out;
    std::vector<std::string_view> f;

    SideTable tables[2];
    {
        CsvReader r(nodes_csv, "side");
        while (r.next(f)) {
            if (f.size() != 3 && f.size() != 5) r.fail("expected side,index,role[,x,y]");
            const Side side = r.side(f[0]);
            const std::uint32_t idx = r.index(f[1]);
            const auto role = parse_role(f[2]);
            if (!role) r.fail("unknown role '" + std::string(f[2]) + "'");
            if (side_of(*role) != side)
                r.fail(std::string("role ") + to_string(*role) + " is not valid on the " +
                       to_string(side) + " side");
            auto& t = tables[static_cast<int>(side)];
            if (!t.roles.emplace(idx, *role).second) r.fail("duplicate node id " + describe({side, idx}));
            if (f.size() == 5 && !(f[3].empty() && f[4].empty()))
                t.coords[idx] = {r.number(f[3]), r.number(f[4])};
        }
    }
    std::vector<Role> roles[2];
    std::optional<std::vector<Point>> coords[2];
    for (int s = 0; s < 2; ++s) {
        const auto& t = tables[s];
        const auto n = static_cast<std::uint32_t>(t.roles.size());
        if (n > 0 && t.roles.rbegin()->first != n - 1)
            throw IoError(nodes_csv.filename().string() + ": " + to_string(static_cast<Side>(s)) +
                          " indices must be dense 0.." + std::to_string(n - 1));
        for (const auto& [idx, role] : t.roles) roles[s].push_back(role);
        if (!t.coords.empty()) {
            if (t.coords.size() != n)
                throw IoError(nodes_csv.filename().string() + ": coordinates must be given for all or none of the " +
                              to_string(static_cast<Side>(s)) + " nodes");
            coords[s].emplace();
            for (const auto& [idx, pt] : t.coords) coords[s]->push_back(pt);
        }
    }
    auto exists = [&](Side s, std::uint32_t i) { return i < roles[static_cast<int>(s)].size(); };

    std::vector<Edge> edges[2];
    {
        CsvReader r(edges_csv, "side");
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen[2];
        while (r.next(f)) {
            if (f.size() != 3) r.fail("expected side,index_a,index_b");
            const Side side = r.side(f[0]);
            const std::uint32_t a = r.index(f[1]);
            const std::uint32_t b = r.index(f[2]);
            if (!exists(side, a) || !exists(side, b))
                r.fail("dangling endpoint in edge " + std::to_string(a) + "-" + std::to_string(b));
            if (a == b) r.fail("self-loop on " + describe({side, a}));
            if (!seen[static_cast<int>(side)].insert(std::minmax(a, b)).second) {
                out.warnings.push_back(r.where() + ": duplicate edge " + describe({side, a}) + "-" +
                                       std::to_string(b) + " collapsed");
                continue;
            }
            edges[static_cast<int>(side)].push_back({a, b});
        }
    }

    std::vector<Arc> ctrl, energy, info;
    std::optional<std::vector<std::pair<std::uint32_t, std::uint32_t>>> dep;
    {
        CsvReader r(deps_csv, "arc_type");
        std::set<std::pair<std::string, Arc>> seen;
        while (r.next(f)) {
            if (f.size() != 5) r.fail("expected arc_type,src_side,src_index,dst_side,dst_index");
            const std::string type(f[0]);
            const NodeId src{r.side(f[1]), r.index(f[2])};
            const NodeId dst{r.side(f[3]), r.index(f[4])};
            if (!exists(src.side, src.index) || !exists(dst.side, dst.index))
                r.fail("dangling endpoint in " + type + " arc " + describe(src) + "->" + describe(dst));
            if (src.side == dst.side) r.fail(type + " arc must connect the two networks");
            auto role_of = [&](NodeId n) { return roles[static_cast<int>(n.side)][n.index]; };
            if (type == "ctrl" || type == "info") {
                if (src.side != Side::Power) r.fail(type + " arcs run from power to comm");
                if (type == "ctrl" && role_of(dst) != Role::ControlCenter)
                    r.fail("ctrl arc target " + describe(dst) + " is " + to_string(role_of(dst)) +
                           ", must be control");
            } else if (type == "energy") {
                if (src.side != Side::Comm) r.fail("energy arcs run from comm to power");
                if (role_of(dst) != Role::Distribution)
                    r.fail("energy arc target " + describe(dst) + " is " + to_string(role_of(dst)) +
                           ", must be distribution");
            } else if (type != "dep") {
                r.fail("unknown arc type '" + type + "'");
            }
            Arc arc{src, dst};
            if (type == "dep" && src.side == Side::Comm) arc = {dst, src};
            if (!seen.insert({type, arc}).second) {
                out.warnings.push_back(r.where() + ": duplicate " + type + " arc collapsed");
                continue;
            }
            if (type == "ctrl") ctrl.push_back(arc);
            else if (type == "energy") energy.push_back(arc);
            else if (type == "info") info.push_back(arc);
            else {
                if (!dep) dep.emplace();
                dep->emplace_back(arc.src.index, arc.dst.index);
            }
        }
    }

    const auto np = static_cast<std::uint32_t>(roles[0].size());
    const auto nc = static_cast<std::uint32_t>(roles[1].size());
    out.system = InterSystem(Graph(np, std::move(edges[0])), std::move(roles[0]),
                             Graph(nc, std::move(edges[1])), std::move(roles[1]), std::move(ctrl),
                             std::move(energy), std::move(info), std::move(dep), std::move(coords[0]),
                             std::move(coords[1]));
    const auto problems = validate_system(out.system);
    if (!problems.empty()) {
        std::string msg = deps_csv.filename().string() + ": invalid topology:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw IoError(msg);
    }
    return out;
}

LoadedTopology load_topology(const std::filesystem::path& dir) {
    return load_topology(dir / "nodes.csv", dir / "edges.csv", dir / "deps.csv");
}

void write_nodes_csv(std::ostream& out, const InterSystem& system) {
    out << "side,index,role,x,y\n";
    for (Side s : {Side::Power, Side::Comm}) {
        const auto& roles = system.roles(s);
        const auto& coords = system.coords(s);
        for (std::uint32_t i = 0; i < roles.size(); ++i) {
            out << to_string(s) << ',' << i << ',' << to_string(roles[i]) << ',';
            if (coords) out << format_double((*coords)[i].x) << ',' << format_double((*coords)[i].y);
            else out << ',';
            out << '\n';
        }
    }
}

void write_edges_csv(std::ostream& out, const InterSystem& system) {
    out << "side,index_a,index_b\n";
    for (Side s : {Side::Power, Side::Comm})
        for (const Edge& e : system.graph(s).edges()) out << to_string(s) << ',' << e.a << ',' << e.b << '\n';
}

void write_deps_csv(std::ostream& out, const InterSystem& system) {
    out << "arc_type,src_side,src_index,dst_side,dst_index\n";
    auto arcs = [&](const char* type, const std::vector<Arc>& list) {
        for (const Arc& a : list)
            out << type << ',' << to_string(a.src.side) << ',' << a.src.index << ','
                << to_string(a.dst.side) << ',' << a.dst.index << '\n';
    };
    arcs("ctrl", system.a_ctrl());
    arcs("energy", system.a_energy());
    arcs("info", system.a_info());
    if (system.e_dep())
        for (auto [p, c] : *system.e_dep()) out << "dep,power," << p << ",comm," << c << '\n';
}

void save_topology(const InterSystem& system, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    auto write = [&](const char* name, auto&& fn) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw IoError((dir / name).string() + ": cannot write");
        fn(out, system);
        if (!out) throw IoError((dir / name).string() + ": write failed");
    };
    write("nodes.csv", write_nodes_csv);
    write("edges.csv", write_edges_csv);
    write("deps.csv", write_deps_csv);
}

void write_events_csv(std::ostream& out, const InterSystem& system, const CascadeReport& report) {
    out << "round,side,index,role,reason\n";
    for (const LoggedEvent& e : report.events())
        out << e.round << ',' << to_string(e.node.side) << ',' << e.node.index << ','
            << to_string(system.role(e.node)) << ',' << to_string(e.reason) << '\n';
}

void write_targets_csv(std::ostream& out, const std::vector<NodeId>& targets) {
    out << "side,index\n";
    for (const NodeId& n : targets) out << to_string(n.side) << ',' << n.index << '\n';
}

std::vector<NodeId> read_targets_csv(const std::filesystem::path& file) {
    CsvReader r(file, "side");
    std::vector<std::string_view> f;
    std::vector<NodeId> out;
    while (r.next(f)) {
        if (f.size() != 2) r.fail("expected side,index");
        out.push_back({r.side(f[0]), r.index(f[1])});
    }
    return out;
}

std::vector<NodeId> parse_node_list(const std::string& text) {
    std::vector<NodeId> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string_view t = trim(item);
        if (t.empty()) continue;
        const auto colon = t.find(':');
        if (colon == std::string_view::npos) throw IoError("expected side:index, got '" + std::string(t) + "'");
        const auto side = parse_side(t.substr(0, colon));
        const auto num = t.substr(colon + 1);
        std::uint32_t idx = 0;
        const auto res = std::from_chars(num.data(), num.data() + num.size(), idx);
        if (!side || res.ec != std::errc{} || res.ptr != num.data() + num.size())
            throw IoError("expected side:index, got '" + std::string(t) + "'");
        out.push_back({*side, idx});
    }
    return out;
}

}  // namespace interdep
