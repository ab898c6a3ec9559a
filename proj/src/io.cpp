#include "tdsynth/io.hpp"

#include <cstdint>
#include <random>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "tdsynth/synthesis.hpp"
#include "tdsynth/tableau.hpp"

namespace tdsynth {

namespace {

int log2_exact(int dim, const char* what) {
    int n = 0;
    while ((1 << n) < dim) ++n;
    if ((1 << n) != dim || dim < 2) throw ValidationError(std::string(what) + ": dimension is not a power of two");
    return n;
}

}  // namespace

std::string circuit_to_text(const Circuit& c) {
    DepthMetrics m = circuit_depth_metrics(c);
    std::ostringstream out;
    out << "# n " << c.n << "\n";
    out << "# t-count " << m.t_count << " t-depth " << m.t_depth << "\n";
    for (const Gate& g : c.gates) {
        out << gate_name(g.kind) << ' ' << g.q0;
        if (g.kind == GateKind::CNOT) out << ' ' << g.q1;
        out << '\n';
    }
    return out.str();
}

Circuit parse_circuit_text(const std::string& text) {
    static const std::unordered_map<std::string, GateKind> kinds = {
        {"h", GateKind::H},     {"s", GateKind::S}, {"sdg", GateKind::Sdg},
        {"t", GateKind::T},     {"tdg", GateKind::Tdg}, {"x", GateKind::X},
        {"y", GateKind::Y},     {"z", GateKind::Z}, {"cnot", GateKind::CNOT}};

    Circuit c;
    int header_n = 0;
    int max_q = -1;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;  // blank
        if (tok[0] == '#') {
            // Only the "# n <count>" comment is meaningful.
            std::string key;
            if (tok == "#")
                ls >> key;
            else
                key = tok.substr(1);
            int v = 0;
            if (key == "n" && (ls >> v) && v > 0) header_n = v;
            continue;
        }
        auto it = kinds.find(tok);
        if (it == kinds.end())
            throw ParseError("circuit line " + std::to_string(lineno) + ": unknown gate " + tok);
        Gate g{it->second, 0, -1};
        if (!(ls >> g.q0) || g.q0 < 0)
            throw ParseError("circuit line " + std::to_string(lineno) + ": bad operand");
        if (g.kind == GateKind::CNOT) {
            if (!(ls >> g.q1) || g.q1 < 0 || g.q1 == g.q0)
                throw ParseError("circuit line " + std::to_string(lineno) +
                                 ": cnot needs two distinct operands");
            max_q = std::max(max_q, g.q1);
        }
        std::string extra;
        if (ls >> extra)
            throw ParseError("circuit line " + std::to_string(lineno) + ": trailing token " + extra);
        max_q = std::max(max_q, g.q0);
        c.gates.push_back(g);
    }
    if (header_n > 0) {
        if (max_q >= header_n)
            throw ParseError("circuit: operand " + std::to_string(max_q) +
                             " outside declared n " + std::to_string(header_n));
        c.n = header_n;
    } else if (max_q >= 0) {
        c.n = max_q + 1;
    } else {
        throw ParseError("circuit: empty input with no qubit count header");
    }
    return c;
}

std::string circuit_to_qasm(const Circuit& c) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << c.n << "];\n";
    for (const Gate& g : c.gates) {
        if (g.kind == GateKind::CNOT)
            out << "cx q[" << g.q0 << "],q[" << g.q1 << "];\n";
        else
            out << gate_name(g.kind) << " q[" << g.q0 << "];\n";
    }
    return out.str();
}

std::string unitary_to_json(const UMat& u) {
    int n = log2_exact(u.dim(), "unitary_to_json");
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < u.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int col = 0; col < u.dim(); ++col) {
            const GaussianRootTwo& v = u.at(r, col);
            row.push_back({v.a(), v.b(), v.c(), v.d(), v.k()});
        }
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"n", n}, {"matrix", std::move(rows)}}.dump();
}

std::string channel_to_json(const ChannelMatrix& a) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < a.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int col = 0; col < a.dim(); ++col) {
            const DyadicRootTwo& v = a.at(r, col);
            row.push_back({v.a(), v.b(), v.k()});
        }
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"n", a.n()}, {"channel", std::move(rows)}}.dump();
}

SynthInput parse_input_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("input: invalid JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || !j.contains("n")) throw ParseError("input: missing \"n\"");
        const int n = j.at("n").get<int>();
        if (n < 1 || n > 16) throw ParseError("input: bad qubit count");
        const bool has_m = j.contains("matrix");
        const bool has_c = j.contains("channel");
        if (has_m == has_c)
            throw ParseError("input: exactly one of \"matrix\" or \"channel\" required");

        SynthInput in;
        in.n = n;
        if (has_m) {
            const auto& rows = j.at("matrix");
            const int dim = 1 << n;
            if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
                throw ParseError("input: matrix must have 2^n rows");
            UMat u(dim);
            for (int r = 0; r < dim; ++r) {
                const auto& row = rows.at(r);
                if (!row.is_array() || static_cast<int>(row.size()) != dim)
                    throw ParseError("input: matrix row of wrong length");
                for (int c = 0; c < dim; ++c) {
                    const auto& e = row.at(c);
                    if (!e.is_array() || e.size() != 5)
                        throw ParseError("input: matrix entry must be [a,b,c,d,k]");
                    u.at(r, c) =
                        GaussianRootTwo(e.at(0).get<Int>(), e.at(1).get<Int>(), e.at(2).get<Int>(),
                                        e.at(3).get<Int>(), e.at(4).get<int>());
                }
            }
            in.unitary = std::move(u);
        } else {
            const auto& rows = j.at("channel");
            const int dim = 1 << (2 * n);
            if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
                throw ParseError("input: channel must have 4^n rows");
            ChannelMatrix a = ChannelMatrix::identity(n);
            for (int r = 0; r < dim; ++r) {
                const auto& row = rows.at(r);
                if (!row.is_array() || static_cast<int>(row.size()) != dim)
                    throw ParseError("input: channel row of wrong length");
                for (int c = 0; c < dim; ++c) {
                    const auto& e = row.at(c);
                    if (!e.is_array() || e.size() != 3)
                        throw ParseError("input: channel entry must be [a,b,k]");
                    a.at(r, c) =
                        DyadicRootTwo(e.at(0).get<Int>(), e.at(1).get<Int>(), e.at(2).get<int>());
                }
            }
            in.channel = std::move(a);
        }
        return in;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("input: malformed field: ") + e.what());
    }
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"toffoli", "fredkin", "peres", "qor",
                                                   "ntoffoli", "cnot",    "swap"};
    return names;
}

UMat builtin_unitary(const std::string& name) {
    // Basis-state images x -> perm[x]; qubit 0 is the most significant bit.
    std::vector<int> perm;
    if (name == "toffoli") {
        perm = {0, 1, 2, 3, 4, 5, 7, 6};
    } else if (name == "fredkin") {
        perm = {0, 1, 2, 3, 4, 6, 5, 7};
    } else if (name == "peres") {
        perm = {0, 1, 2, 3, 6, 7, 5, 4};
    } else if (name == "qor") {
        perm = {0, 1, 3, 2, 5, 4, 7, 6};
    } else if (name == "ntoffoli") {
        perm = {1, 0, 2, 3, 4, 5, 6, 7};
    } else if (name == "cnot") {
        perm = {0, 1, 3, 2};
    } else if (name == "swap") {
        perm = {0, 2, 1, 3};
    } else {
        throw ParseError("unknown builtin unitary: " + name);
    }
    UMat u(static_cast<int>(perm.size()));
    for (int x = 0; x < static_cast<int>(perm.size()); ++x)
        u.at(perm[x], x) = GaussianRootTwo::one();
    return u;
}

namespace {

Circuit random_clifford_stage(int n, std::mt19937_64& rng) {
    CliffordTableau t = CliffordTableau::identity(n);
    const int steps = 8 * n;
    for (int s = 0; s < steps; ++s) {
        Gate g;
        const int pick = n > 1 ? static_cast<int>(rng() % 3) : static_cast<int>(rng() % 2);
        if (pick == 0) {
            g = Gate{GateKind::H, static_cast<int>(rng() % n)};
        } else if (pick == 1) {
            g = Gate{GateKind::S, static_cast<int>(rng() % n)};
        } else {
            int a = static_cast<int>(rng() % n);
            int b = static_cast<int>(rng() % (n - 1));
            if (b >= a) ++b;
            g = Gate{GateKind::CNOT, a, b};
        }
        t = compose(gate_tableau(g, n), t);
    }
    return tableau_to_circuit(t);
}

}  // namespace

Circuit random_circuit(int n, int t_depth, std::uint64_t seed) {
    if (n < 1) throw ValidationError("random_circuit: need at least one qubit");
    if (t_depth < 0) throw ValidationError("random_circuit: negative T-depth");
    std::mt19937_64 rng(seed);
    Circuit c;
    c.n = n;
    // Every T-layer hits the spine wire, so consecutive layers are causally
    // chained and the recomputed T-depth cannot collapse below t_depth.
    const int spine = static_cast<int>(rng() % n);
    int t_count = 0;
    for (int layer = 0; layer < t_depth; ++layer) {
        c.append(random_clifford_stage(n, rng));
        for (int q = 0; q < n; ++q) {
            if (q == spine) {
                c.append(rng() % 2 ? GateKind::Tdg : GateKind::T, q);
                ++t_count;
            } else {
                switch (rng() % 3) {
                    case 1: c.append(GateKind::T, q); ++t_count; break;
                    case 2: c.append(GateKind::Tdg, q); ++t_count; break;
                    default: break;
                }
            }
        }
    }
    c.append(random_clifford_stage(n, rng));
    DepthMetrics m = circuit_depth_metrics(c);
    if (m.t_depth != t_depth || m.t_count != t_count)
        throw Error("random_circuit: staging invariant violated");
    return c;
}

}  // namespace tdsynth
