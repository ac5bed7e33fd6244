#pragma once

// JSON schemas for profiles, kernels and certificates.

#include <fstream>
#include <string>

#include <json.hpp>

#include "hsm/definiteness.hpp"
#include "hsm/experiments.hpp"
#include "hsm/free_group.hpp"
#include "hsm/kernel.hpp"
#include "hsm/littlewood.hpp"
#include "hsm/schur_norm.hpp"
#include "hsm/toeplitz.hpp"

namespace hsm {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// RadialProfile: { "prefix": [...], "tail": { "kind": ..., ... } }

inline RadialProfile profile_from_json(const json& j) {
    RadialProfile p;
    if (j.contains("prefix")) p.prefix = j.at("prefix").get<std::vector<double>>();
    const json& t = j.at("tail");
    std::string kind = t.at("kind").get<std::string>();
    if (kind == "zero") {
        p.tail = ProfileTail::zero();
    } else if (kind == "constants") {
        p.tail = ProfileTail::constants(t.at("c_plus").get<double>(),
                                        t.at("c_minus").get<double>());
    } else if (kind == "analytic") {
        std::string rule = t.at("rule").get<std::string>();
        if (rule == "exp")
            p.tail = ProfileTail::exp_rule(t.at("t").get<double>());
        else if (rule == "geometric")
            p.tail = ProfileTail::geometric_rule(t.at("ratio").get<double>());
        else if (rule == "power")
            p.tail = ProfileTail::power_rule(t.value("coef", 1.0), t.at("exponent").get<double>());
        else
            throw Error("profile_from_json: unknown analytic rule '" + rule + "'");
    } else {
        throw Error("profile_from_json: unknown tail kind '" + kind + "'");
    }
    return p;
}

inline json profile_to_json(const RadialProfile& p) {
    json t;
    switch (p.tail.kind) {
        case ProfileTail::Kind::Zero: t["kind"] = "zero"; break;
        case ProfileTail::Kind::Constants:
            t["kind"] = "constants";
            t["c_plus"] = p.tail.c_plus;
            t["c_minus"] = p.tail.c_minus;
            break;
        case ProfileTail::Kind::Analytic:
            t["kind"] = "analytic";
            switch (p.tail.rule) {
                case ProfileTail::Rule::Exp:
                    t["rule"] = "exp";
                    t["t"] = p.tail.t;
                    break;
                case ProfileTail::Rule::Geometric:
                    t["rule"] = "geometric";
                    t["ratio"] = p.tail.ratio;
                    break;
                case ProfileTail::Rule::Power:
                    t["rule"] = "power";
                    t["coef"] = p.tail.coef;
                    t["exponent"] = p.tail.exponent;
                    break;
            }
            break;
    }
    return json{{"prefix", p.prefix}, {"tail", t}};
}

// ---------------------------------------------------------------------------
// Kernel: { "n": int, "real": bool, "entries": row-major array }. Complex
// entries are [re, im] pairs.

inline Kernel kernel_from_json(const json& j) {
    int n = j.at("n").get<int>();
    bool real = j.value("real", true);
    bool hermitian = j.value("hermitian", false);
    const json& e = j.at("entries");
    if (static_cast<int>(e.size()) != n * n)
        throw Error("kernel_from_json: entries length must be n*n");
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const json& v = e[static_cast<size_t>(i * n + k)];
            if (real)
                m(i, k) = cplx(v.get<double>(), 0.0);
            else
                m(i, k) = cplx(v.at(0).get<double>(), v.at(1).get<double>());
        }
    return Kernel(std::move(m), hermitian);
}

inline json kernel_to_json(const Kernel& k) {
    json e = json::array();
    for (int i = 0; i < k.size(); ++i)
        for (int j = 0; j < k.size(); ++j) {
            cplx v = k(i, j);
            if (k.real)
                e.push_back(v.real());
            else
                e.push_back(json::array({v.real(), v.imag()}));
        }
    return json{{"n", k.size()}, {"real", k.real}, {"hermitian", k.hermitian}, {"entries", e}};
}

// ---------------------------------------------------------------------------
// Certificates.

inline json to_json(const NormCertificate& c) {
    json j{{"value", c.value},
           {"lower_bracket", c.lower_bracket},
           {"upper_bracket", c.upper_bracket},
           {"tolerance", c.tolerance},
           {"iterations", c.iterations},
           {"method", c.method}};
    if (c.witness) {
        j["witness"] = {{"residual", c.witness->residual},
                        {"b_diag_max", c.witness->b.diagonal().real().maxCoeff()},
                        {"c_diag_max", c.witness->c.diagonal().real().maxCoeff()}};
    }
    return j;
}

inline json to_json(const OmegaNormCertificate& c) {
    json j{{"hankel_trace_norm", c.hankel_trace_norm},
           {"total", c.total},
           {"truncation", c.truncation}};
    if (c.tail_bound)
        j["tail_bound"] = *c.tail_bound;
    else
        j["tail_bound"] = "unknown";
    if (c.constants_present) {
        j["c_plus"] = c.c_plus;
        j["c_minus"] = c.c_minus;
    } else {
        j["phi0_constants"] = "absent";
    }
    return j;
}

inline json to_json(const DefinitenessReport& r) {
    json j{{"verdict", r.verdict},
           {"extremal_eigenvalue", r.extremal_eigenvalue},
           {"tolerance_used", r.tolerance_used}};
    if (r.witness_vector) {
        json w = json::array();
        for (Eigen::Index i = 0; i < r.witness_vector->size(); ++i) {
            cplx v = (*r.witness_vector)(i);
            w.push_back(json::array({v.real(), v.imag()}));
        }
        j["witness_vector"] = w;
    }
    return j;
}

inline json to_json(const ConditionReport& r) {
    json conds = json::array();
    for (size_t i = 0; i < r.names.size(); ++i)
        conds.push_back(json{{"name", r.names[i]},
                             {"verdict", r.verdicts[i]},
                             {"extremal_eigenvalue", r.extremal_eigenvalues[i]}});
    return json{{"conditions", conds}, {"all_pass", r.all_pass()}};
}

inline json to_json(const SMembershipEvidence& ev) {
    json certs = json::array();
    for (size_t i = 0; i < ev.t_values.size(); ++i) {
        json c = to_json(ev.certificates[i]);
        c["t"] = ev.t_values[i];
        certs.push_back(c);
    }
    json j{{"consistent", ev.consistent}, {"certificates", certs}};
    if (ev.violating_t) {
        j["violating_t"] = *ev.violating_t;
        j["max_excess"] = ev.max_excess;
    }
    return j;
}

inline json to_json(const LittlewoodSplit& s) {
    auto mat = [](const Eigen::MatrixXcd& m) {
        json out = json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j).real());
        return out;
    };
    return json{{"b", mat(s.b)},
                {"c", mat(s.c)},
                {"supports_disjoint", s.supports_disjoint},
                {"col_bound", s.col_bound},
                {"row_bound", s.row_bound}};
}

inline json to_json(const ScanReport& r) {
    json certs = json::array();
    for (size_t i = 0; i < r.t_values.size(); ++i) {
        json c = to_json(r.certificates[i]);
        c["t"] = r.t_values[i];
        certs.push_back(c);
    }
    json j{{"profile_id", r.profile_id},
           {"certificates", certs},
           {"consistent", r.consistent},
           {"truncation_used", r.truncation_used}};
    if (r.consistent) {
        j["verdict"] = "all <= 1: linear bound fitted";
        j["fitted_a"] = *r.fitted_a;
        j["fitted_b"] = *r.fitted_b;
    } else {
        j["verdict"] = "violation at t = " + std::to_string(*r.violating_t);
        j["violating_t"] = *r.violating_t;
        j["max_excess"] = r.max_excess;
    }
    return j;
}

// ---------------------------------------------------------------------------
// File helpers.

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file: " + path);
    json j;
    in >> j;
    return j;
}

inline void write_json(const std::string& path, const json& j) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot open output file: " + path);
        out << j.dump(2) << "\n";
    }
    std::rename(tmp.c_str(), path.c_str());
}

/// FNV-1a digest of a file's bytes, for run manifests.
inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "missing";
    uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace hsm
