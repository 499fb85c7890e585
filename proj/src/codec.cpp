#include <sstream>

#include "tqft/mesh.hpp"

namespace tqft {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

int parse_int(const std::string& s, int lineno) {
    try {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SyntaxError(lineno, "expected integer, got '" + s + "'");
    }
}

double parse_num(const std::string& s, int lineno) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SyntaxError(lineno, "expected number, got '" + s + "'");
    }
}

}  // namespace

ParsedFile parse_triangulation(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int ntets = -1;
    std::vector<int> signs;
    std::vector<std::pair<FaceSlot, FaceSlot>> gluings;
    std::set<int> gamma;
    std::vector<std::array<double, 3>> angles;
    std::vector<bool> angle_set;
    bool header_seen = false;

    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        if (!header_seen) {
            if (toks.size() != 2 || toks[0] != "tqft-tri" || toks[1] != "v1")
                throw SyntaxError(lineno, "expected header 'tqft-tri v1'");
            header_seen = true;
            continue;
        }
        const std::string& kw = toks[0];
        if (kw == "tets") {
            if (toks.size() != 2) throw SyntaxError(lineno, "usage: tets <n>");
            ntets = parse_int(toks[1], lineno);
            if (ntets < 0) throw SyntaxError(lineno, "negative tetrahedron count");
            signs.assign(ntets, 1);
            angles.assign(ntets, {0, 0, 0});
            angle_set.assign(ntets, false);
        } else if (kw == "signs") {
            if (ntets < 0) throw SyntaxError(lineno, "'signs' before 'tets'");
            if (static_cast<int>(toks.size()) != ntets + 1)
                throw SyntaxError(lineno, "expected one sign per tetrahedron");
            for (int i = 0; i < ntets; ++i) {
                int s = parse_int(toks[i + 1], lineno);
                if (s != 1 && s != -1) throw SyntaxError(lineno, "sign must be +1 or -1");
                signs[i] = s;
            }
        } else if (kw == "glue") {
            if (toks.size() != 5) throw SyntaxError(lineno, "usage: glue <t> <f> <t'> <f'>");
            FaceSlot a{parse_int(toks[1], lineno), parse_int(toks[2], lineno)};
            FaceSlot b{parse_int(toks[3], lineno), parse_int(toks[4], lineno)};
            gluings.emplace_back(a, b);
        } else if (kw == "gamma") {
            for (size_t i = 1; i < toks.size(); ++i) gamma.insert(parse_int(toks[i], lineno));
        } else if (kw == "angles") {
            if (toks.size() != 5) throw SyntaxError(lineno, "usage: angles <t> <a> <b> <c>");
            int t = parse_int(toks[1], lineno);
            if (t < 0 || t >= ntets) throw SyntaxError(lineno, "tetrahedron index out of range");
            for (int j = 0; j < 3; ++j) angles[t][j] = parse_num(toks[2 + j], lineno);
            angle_set[t] = true;
        } else {
            throw SyntaxError(lineno, "unknown keyword '" + kw + "'");
        }
    }
    if (!header_seen) throw SyntaxError(lineno, "missing header 'tqft-tri v1'");
    if (ntets < 0) throw SyntaxError(lineno, "missing 'tets' line");

    ParsedFile out;
    try {
        out.tri = build_triangulation(signs, gluings, gamma);
    } catch (const Error& e) {
        throw SemanticError(e.what());
    }
    bool any = false, all = true;
    for (size_t i = 0; i < angle_set.size(); ++i) {
        any = any || angle_set[i];
        all = all && angle_set[i];
    }
    if (any && !all) throw SemanticError("angles given for some but not all tetrahedra");
    if (all && ntets > 0) out.angles = angles;
    return out;
}

std::string serialize_triangulation(const Triangulation& tri,
                                    const std::vector<std::array<double, 3>>& angles) {
    std::ostringstream os;
    os << "tqft-tri v1\n";
    os << "tets " << tri.num_tets() << "\n";
    os << "signs";
    for (const auto& t : tri.tets()) os << (t.sign > 0 ? " +1" : " -1");
    os << "\n";
    for (const auto& [a, b] : tri.gluings())
        os << "glue " << a.tet << " " << a.face << " " << b.tet << " " << b.face << "\n";
    if (!tri.gamma().empty()) {
        os << "gamma";
        for (int e : tri.gamma()) os << " " << e;
        os << "\n";
    }
    if (!angles.empty()) {
        os.precision(17);
        for (int t = 0; t < tri.num_tets(); ++t)
            os << "angles " << t << " " << angles[t][0] << " " << angles[t][1] << " "
               << angles[t][2] << "\n";
    }
    return os.str();
}

}  // namespace tqft
