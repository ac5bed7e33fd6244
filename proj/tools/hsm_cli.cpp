// Unified command-line entry point. Every subcommand writes a JSON
// certificate plus a run manifest, and exits 0 on success, 2 on a
// verdict-negative mathematical outcome, 1 on error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hsm/experiments.hpp"
#include "hsm/free_group.hpp"
#include "hsm/json_io.hpp"
#include "hsm/littlewood.hpp"
#include "hsm/qtransform.hpp"
#include "hsm/schur_norm.hpp"
#include "hsm/toeplitz.hpp"
#include "hsm/tree.hpp"

namespace {

constexpr const char* kToolVersion = "hsm 1.0.0";

constexpr int kExitSuccess = 0;
constexpr int kExitError = 1;
constexpr int kExitNegative = 2;

struct Common {
    std::string out_dir = ".";
    bool deterministic = false;
};

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw hsm::Error("empty grid");
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_grid(csv)) out.push_back(static_cast<int>(v));
    return out;
}

hsm::GroupChoice parse_group(const std::string& g) {
    if (g == "finf") return hsm::GroupChoice::f_inf();
    if (g.size() >= 2 && g[0] == 'f') return hsm::GroupChoice::f_n(std::stoi(g.substr(1)));
    throw hsm::Error("unknown group '" + g + "' (use finf, f2, f3, ...)");
}

/// Writes <out>/<name>.json plus <out>/<name>.manifest.json and prints the
/// certificate to stdout.
void emit(const Common& common, const std::string& name, const hsm::json& certificate,
          const std::string& command, const hsm::json& parameters,
          const std::vector<std::string>& input_files, double wall_seconds) {
    namespace fs = std::filesystem;
    fs::create_directories(common.out_dir);
    std::string cert_path = (fs::path(common.out_dir) / (name + ".json")).string();
    hsm::write_json(cert_path, certificate);

    hsm::json digests = hsm::json::object();
    for (const auto& f : input_files) digests[f] = hsm::file_digest(f);
    hsm::json manifest{{"command", command},
                       {"input_digests", digests},
                       {"parameters", parameters},
                       {"tool_version", kToolVersion},
                       {"output_paths", hsm::json::array({cert_path})},
                       {"deterministic", common.deterministic}};
    // Wall time varies run to run; omit it in deterministic mode so manifests
    // are reproducible bit for bit.
    if (!common.deterministic) manifest["wall_seconds"] = wall_seconds;
    std::string manifest_path =
        (fs::path(common.out_dir) / (name + ".manifest.json")).string();
    hsm::write_json(manifest_path, manifest);

    std::cout << certificate.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Herz-Schur multiplier norms, definiteness certificates and "
                 "radial norm calculus on free groups"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--out", common.out_dir, "Output directory for certificates");
    app.add_flag("--deterministic", common.deterministic,
                 "Fixed ordering/seeding; manifests reproduce bit for bit");

    // ---- per-subcommand state -------------------------------------------
    std::string input_path, profile_path, subset_csv, group_str = "finf";
    std::string t_grid_csv = "1,0.3,0.1,0.03,0.01", n_ladder_csv = "100,200,400";
    double tol = 1e-6;
    int n = 200, q = 3, radius = 2, level = 50, window = 50;

    auto* sc_schur = app.add_subcommand("schur-norm", "Schur multiplier norm of a matrix");
    sc_schur->add_option("--input", input_path, "Kernel JSON")->required();
    sc_schur->add_option("--tol", tol, "Bisection tolerance");
    sc_schur->add_option("--subset", subset_csv, "Principal submatrix indices i,j,k");

    auto* sc_omega = app.add_subcommand("omega-norm", "Functional norm of a radial profile");
    sc_omega->add_option("--profile", profile_path, "Profile JSON")->required();
    sc_omega->add_option("--n", n, "Truncation");

    auto* sc_chi = app.add_subcommand("chi-norm", "q-functional norm of a radial profile");
    sc_chi->add_option("--profile", profile_path, "Profile JSON")->required();
    sc_chi->add_option("--q", q, "q parameter");
    sc_chi->add_option("--n", n, "Truncation");

    auto* sc_scheck = app.add_subcommand("s-check", "Semigroup norm scan over a t-grid");
    sc_scheck->add_option("--profile", profile_path, "Profile JSON")->required();
    sc_scheck->add_option("--t-grid", t_grid_csv, "Comma-separated t values");
    sc_scheck->add_option("--n", n, "Truncation");
    sc_scheck->add_option("--tol", tol, "Excess tolerance");

    auto* sc_qscheck = app.add_subcommand("q-s-check", "q-analogue semigroup norm scan");
    sc_qscheck->add_option("--profile", profile_path, "Profile JSON")->required();
    sc_qscheck->add_option("--q", q, "q parameter");
    sc_qscheck->add_option("--t-grid", t_grid_csv, "Comma-separated t values");
    sc_qscheck->add_option("--n", n, "Truncation");
    sc_qscheck->add_option("--tol", tol, "Excess tolerance");

    auto* sc_radial = app.add_subcommand("radial-norm", "Radial multiplier norm on a free group");
    sc_radial->add_option("--profile", profile_path, "Profile JSON")->required();
    sc_radial->add_option("--group", group_str, "finf, f2, f3, ...");
    sc_radial->add_option("--n", n, "Truncation");

    auto* sc_ball = app.add_subcommand("ball-schur", "Schur norm of a metric-ball matrix");
    sc_ball->add_option("--profile", profile_path, "Profile JSON")->required();
    sc_ball->add_option("--group", group_str, "f2, f3, ...");
    sc_ball->add_option("--radius", radius, "Ball radius");
    sc_ball->add_option("--tol", tol, "Bisection tolerance");

    auto* sc_tree = app.add_subcommand("tree-check", "Tree (m,n) geometry consistency check");
    sc_tree->add_option("--q", q, "Branching parameter");
    sc_tree->add_option("--radius", radius, "Ball radius");

    auto* sc_lw = app.add_subcommand("littlewood", "t2 norm and disjoint-support split");
    sc_lw->add_option("--input", input_path, "Matrix JSON")->required();

    auto* sc_scan = app.add_subcommand("linear-bound-scan", "Semigroup scan + linear bound fit");
    sc_scan->add_option("--profile", profile_path, "Profile JSON")->required();
    sc_scan->add_option("--group", group_str, "finf or fk");
    sc_scan->add_option("--t-grid", t_grid_csv, "Comma-separated t values");
    sc_scan->add_option("--n-ladder", n_ladder_csv, "Truncation ladder");
    sc_scan->add_option("--window", window, "Fit window");
    sc_scan->add_option("--tol", tol, "Excess tolerance");

    auto* sc_rs = app.add_subcommand("extract-rs", "Finite-level R/S map extraction");
    sc_rs->add_option("--profile", profile_path, "Profile JSON")->required();
    sc_rs->add_option("--group", group_str, "f2, f3, ...");
    sc_rs->add_option("--radius", radius, "Ball radius");
    sc_rs->add_option("--level", level, "Linearization level n");

    auto* sc_wh = app.add_subcommand("wh-combine", "Combine multipliers into a proper function");
    sc_wh->add_option("--profile", profile_path,
                      "Profile JSON; the family is e^{-t phi} over the t-grid")
        ->required();
    sc_wh->add_option("--t-grid", t_grid_csv, "Family parameter values");
    sc_wh->add_option("--window", window, "Window of evaluation points");

    auto* sc_def = app.add_subcommand("definiteness", "PD / CND certificates for a kernel");
    sc_def->add_option("--input", input_path, "Kernel JSON")->required();
    sc_def->add_option("--tol", tol, "Eigenvalue tolerance");

    // Let --out / --deterministic appear after the subcommand name too.
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        // Help requested is a success; anything else is a usage error.
        return rc == 0 ? kExitSuccess : kExitError;
    }

    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    std::string full_command;
    for (int i = 0; i < argc; ++i) full_command += std::string(i ? " " : "") + argv[i];

    try {
        if (sc_schur->parsed()) {
            hsm::Kernel k = hsm::kernel_from_json(hsm::load_json(input_path));
            hsm::NormCertificate cert;
            if (!subset_csv.empty())
                cert = hsm::restricted_norm(k, parse_int_list(subset_csv), tol);
            else
                cert = hsm::schur_norm(k, tol);
            emit(common, "schur_norm", hsm::to_json(cert), full_command,
                 {{"tol", tol}, {"subset", subset_csv}}, {input_path}, elapsed());
            return kExitSuccess;
        }
        if (sc_omega->parsed()) {
            auto profile = hsm::profile_from_json(hsm::load_json(profile_path));
            auto cert = hsm::omega_norm(hsm::lift_radial(profile), n);
            emit(common, "omega_norm", hsm::to_json(cert), full_command, {{"n", n}},
                 {profile_path}, elapsed());
            return kExitSuccess;
        }
        if (sc_chi->parsed()) {
            auto profile = hsm::profile_from_json(hsm::load_json(profile_path));
            auto cert = hsm::chi_norm(hsm::lift_radial(profile), q, n);
            emit(common, "chi_norm", hsm::to_json(cert), full_command, {{"q", q}, {"n", n}},
                 {profile_path}, elapsed());
            return kExitSuccess;
        }
        if (sc_scheck->parsed() || sc_qscheck->parsed()) {
            auto profile = hsm::profile_from_json(hsm::load_json(profile_path));
            auto grid = parse_grid(t_grid_csv);
            hsm::SMembershipEvidence ev =
                sc_scheck->parsed()
                    ? hsm::s_membership(hsm::lift_radial(profile), grid, n, tol)
                    : hsm::q_s_membership(hsm::lift_radial(profile), q, grid, n, tol);
            emit(common, sc_scheck->parsed() ? "s_check" : "q_s_check", hsm::to_json(ev),
                 full_command, {{"t_grid", grid}, {"n", n}, {"q", q}, {"tol", tol}},
                 {profile_path}, elapsed());
            return ev.consistent ? kExitSuccess : kExitNegative;
        }
        if (sc_radial->parsed()) {
            auto profile = hsm::profile_from_json(hsm::load_json(profile_path));
            auto cert = hsm::radial_b2_norm(profile, parse_group(group_str), n);
            emit(common, "radial_norm", hsm::to_json(cert), full_command,
                 {{"group", group_str}, {"n", n}}, {profile_path}, elapsed());
            return kExitSuccess;
        }
        if (sc_ball->parsed()) {
            auto profile = hsm::profile_from_json(hsm::load_json(profile_path));
            auto group = parse_group(group_str);
            if (group.infinite) throw hsm::Error("ball-schur: need a finite-rank group (f2, ...)");
            auto ball = hsm::enumerate_ball(group.n_generators, radius);
            auto cert = hsm::schur_norm(hsm::group_matrix(profile, ball), tol);
            hsm::json j = hsm::to_json(cert);
            j["ball_size"] = ball.size();
            emit(common, "ball_schur", j, full_command,
                 {{"group", group_str}, {"radius", radius}, {"tol", tol}}, {profile_path},
                 elapsed());
            return kExitSuccess;
        }
        if (sc_tree->parsed()) {
            hsm::TreePortion tree(q, radius);
            long violations = tree.additivity_check();
            hsm::json j{{"q", q},
                        {"radius", radius},
                        {"ball_vertices", tree.ball_vertices().size()},
                        {"additivity_violations", violations}};
            emit(common, "tree_check", j, full_command, {{"q", q}, {"radius", radius}}, {},
                 elapsed());
            return violations == 0 ? kExitSuccess : kExitNegative;
        }
        if (sc_lw->parsed()) {
            hsm::Kernel k = hsm::kernel_from_json(hsm::load_json(input_path));
            auto split = hsm::littlewood_split(k.entries);
            hsm::json j = hsm::to_json(split);
            j["l_norm_upper"] = hsm::l_norm_upper(split);
            if (k.size() <= 8) j["t2_norm"] = hsm::t2_norm(k.entries);
            emit(common, "littlewood", j, full_command, hsm::json::object(), {input_path},
                 elapsed());
            return kExitSuccess;
        }
        if (sc_scan->parsed()) {
            auto profile = hsm::profile_from_json(hsm::load_json(profile_path));
            auto rep = hsm::linear_bound_scan(profile, parse_group(group_str),
                                              parse_grid(t_grid_csv),
                                              parse_int_list(n_ladder_csv), window, tol);
            emit(common, "linear_bound_scan", hsm::to_json(rep), full_command,
                 {{"group", group_str},
                  {"t_grid", parse_grid(t_grid_csv)},
                  {"n_ladder", parse_int_list(n_ladder_csv)},
                  {"window", window},
                  {"tol", tol}},
                 {profile_path}, elapsed());
            return rep.consistent ? kExitSuccess : kExitNegative;
        }
        if (sc_rs->parsed()) {
            auto profile = hsm::profile_from_json(hsm::load_json(profile_path));
            auto group = parse_group(group_str);
            if (group.infinite) throw hsm::Error("extract-rs: need a finite-rank group (f2, ...)");
            auto ball = hsm::enumerate_ball(group.n_generators, radius);
            Eigen::MatrixXd phi = hsm::group_matrix(profile, ball).real_part();
            auto rs = hsm::extract_rs(phi, level);
            hsm::json j{{"ball_size", ball.size()},
                        {"level", level},
                        {"embedding_dimension", rs.R.cols()},
                        {"residual", rs.residual},
                        {"linearization_gap", rs.linearization_gap}};
            emit(common, "extract_rs", j, full_command,
                 {{"group", group_str}, {"radius", radius}, {"level", level}}, {profile_path},
                 elapsed());
            return kExitSuccess;
        }
        if (sc_wh->parsed()) {
            auto profile = hsm::profile_from_json(hsm::load_json(profile_path));
            auto grid = parse_grid(t_grid_csv);
            std::vector<std::function<double(std::size_t)>> family;
            std::vector<double> bounds;
            for (double t : grid) {
                family.push_back([profile, t](std::size_t g) {
                    return std::exp(-t * profile.eval(static_cast<long>(g)));
                });
                bounds.push_back(1.0);  // states have norm exactly 1
            }
            auto combined =
                hsm::wh_combine(family, bounds, static_cast<std::size_t>(window),
                                hsm::WHSchedule::standard());
            hsm::json j{{"phi", combined.phi},
                        {"selected_indices", combined.selected_indices},
                        {"sublevel_sizes", combined.sublevel_sizes}};
            emit(common, "wh_combine", j, full_command, {{"t_grid", grid}, {"window", window}},
                 {profile_path}, elapsed());
            return kExitSuccess;
        }
        if (sc_def->parsed()) {
            hsm::Kernel k = hsm::kernel_from_json(hsm::load_json(input_path));
            auto pd = hsm::is_positive_definite(k, tol);
            auto cnd = hsm::is_cond_negative_definite(k, tol);
            hsm::json j{{"positive_definite", hsm::to_json(pd)},
                        {"conditionally_negative_definite", hsm::to_json(cnd)}};
            emit(common, "definiteness", j, full_command, {{"tol", tol}}, {input_path},
                 elapsed());
            return (pd.verdict || cnd.verdict) ? kExitSuccess : kExitNegative;
        }
        throw hsm::Error("unknown subcommand");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
