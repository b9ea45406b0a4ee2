/**
 * @file lab.cpp
 * @brief Command-line frontend: loads the JSON documents, dispatches the
 *        exact computations, runs the seeded claim suites and emits
 *        JSON/CSV reports.
 *
 * Every printed number is an exact rational rendered as "num/den"
 * ("k" for integers); no decimal output exists anywhere. Exit codes:
 * 0 success, 1 claim-suite failure, 2 validation failure (with a
 * machine-readable error object on stdout).
 */

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>

#include "ultralab/chain.hpp"
#include "ultralab/json_io.hpp"
#include "ultralab/measures.hpp"
#include "ultralab/oracles.hpp"
#include "ultralab/verify.hpp"

using namespace ultralab;

namespace {

PointSet parse_point_set(const UltraSpace& sp, const std::string& csv) {
    PointSet out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        auto comma = csv.find(',', pos);
        std::string token = csv.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
        if (!token.empty()) out.push_back(io_detail::parse_point(sp, token));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw DocumentError("document: empty point set");
    return normalize_set(std::move(out));
}

void emit_report(const std::string& out_path, const Json& report) {
    if (!out_path.empty()) save_json(out_path, report);
}

Json scan_json(const FeasibilityScan& scan) {
    Json bps = Json::array();
    for (const auto& b : scan.breakpoints) bps.push_back(b.str());
    Json worst = Json::array();
    for (const auto& w : scan.interval_worst) worst.push_back(w.str());
    Json feas = Json::array();
    for (const auto& iv : scan.feasible)
        feas.push_back(Json{{"lo", iv.lo.str()},
                            {"lo_attained", iv.lo_attained},
                            {"hi", iv.hi.str()}});
    return Json{{"breakpoints", std::move(bps)},
                {"interval_worst", std::move(worst)},
                {"feasible", std::move(feas)},
                {"infimum", scan.infimum.str()}};
}

struct ScalarPair {
    ScalarBallMap p1, p2;
};

ScalarPair load_scalar_pair(const std::string& path1, const std::string& path2) {
    ScalarBallMap p1 = load_scalar_ball_map(path1);
    ScalarBallMap p2 = load_scalar_ball_map(path2);
    // share one ball space so the metric functions see one domain
    ScalarBallMap p2s(p1.domain, p2.codomain, p2.table);
    require_compatible(p1, p2);
    return {std::move(p1), std::move(p2s)};
}

int run_verify(std::uint64_t seed, std::size_t trials, int workers, const std::string& out_dir,
               const std::string& format, const std::string& inject) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.workers = workers;
    if (inject == "lemma2.1")
        cfg.inject = BugInjection::Lemma21IntersectingBranch;
    else if (!inject.empty())
        throw DocumentError("document: unknown bug injection '" + inject + "'");

    auto results = run_all_claims(cfg);
    bool all_passed = true;
    Json rows = Json::array();
    std::string csv = "claim,trials,passed,seconds,detail\n";
    for (const auto& r : results) {
        all_passed = all_passed && r.passed;
        std::string witness_path;
        if (!r.passed && !out_dir.empty()) {
            witness_path = out_dir + "/witness_" + r.id + ".json";
            save_json(witness_path, r.witness);
        }
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.id << "  trials=" << r.trials;
        if (!r.passed) {
            std::cout << "  [" << r.detail << "]";
            if (!witness_path.empty()) std::cout << "  witness=" << witness_path;
        }
        std::cout << "\n";
        rows.push_back(Json{{"claim", r.id},
                            {"trials", r.trials},
                            {"passed", r.passed},
                            {"seconds", r.seconds},
                            {"detail", r.detail},
                            {"witness_path", witness_path}});
        csv += r.id + "," + std::to_string(r.trials) + "," + (r.passed ? "true" : "false") + "," +
               std::to_string(r.seconds) + ",\"" + r.detail + "\"\n";
    }
    if (!out_dir.empty()) {
        if (format == "csv") {
            std::ofstream out(out_dir + "/verify_report.csv");
            out << csv;
        } else {
            save_json(out_dir + "/verify_report.json",
                      Json{{"schema", kSchema}, {"seed", seed}, {"claims", rows}});
        }
    }
    std::cout << (all_passed ? "all claims passed" : "CLAIM FAILURES PRESENT") << "\n";
    return all_passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ultralab: exact non-Archimedean metric structures"};
    app.require_subcommand(1);

    std::string space_path, a_csv, b_csv, out_path, format = "json";
    std::string p1_path, p2_path, f_path, g_path, m_path, m1_path, m2_path, nu_path;
    std::string kind = "all", mode = "bounds", family = "scaled", variant = "m_flat";
    std::string inject;
    std::string lambda_str = "1", scale_str = "1", eps_str;
    std::uint64_t seed = RunConfig{}.seed;
    std::size_t trials = 0;
    long long mv = 3, nmax = 12, depth = 1;
    int workers = 1;
    if (const char* env = std::getenv("LAB_WORKERS")) workers = std::max(1, std::atoi(env));

    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "write a JSON report here");
        cmd->add_option("--format", format, "report format: json|csv");
    };

    auto* dist_cmd = app.add_subcommand("dist", "exact distance between point sets");
    dist_cmd->add_option("--space", space_path)->required();
    dist_cmd->add_option("--a", a_csv)->required();
    dist_cmd->add_option("--b", b_csv)->required();
    add_out(dist_cmd);

    auto* haus_cmd = app.add_subcommand("hausdorff", "exact Hausdorff distance between sets");
    haus_cmd->add_option("--space", space_path)->required();
    haus_cmd->add_option("--a", a_csv)->required();
    haus_cmd->add_option("--b", b_csv)->required();
    add_out(haus_cmd);

    auto* rho_cmd = app.add_subcommand("rho", "map metrics rho_H, rho_s, rho_b, rho_u");
    rho_cmd->add_option("--f", f_path)->required();
    rho_cmd->add_option("--g", g_path)->required();
    rho_cmd->add_option("--kind", kind, "H|s|b|u|all");
    add_out(rho_cmd);

    auto* beta_cmd = app.add_subcommand("beta", "ball-map metric beta^lambda");
    beta_cmd->add_option("--lambda", lambda_str);
    beta_cmd->add_option("--p1", p1_path)->required();
    beta_cmd->add_option("--p2", p2_path)->required();
    bool star = false, limits = false;
    beta_cmd->add_flag("--star", star, "compute beta* instead");
    beta_cmd->add_flag("--limits", limits, "also compute the four lambda-limits");
    add_out(beta_cmd);

    auto* adm_cmd = app.add_subcommand("admissibility", "admissible degree and C functionals");
    adm_cmd->add_option("--p", p1_path)->required();
    add_out(adm_cmd);

    auto* omega_cmd = app.add_subcommand("omega", "Omega functionals of definition 4.4");
    omega_cmd->add_option("--p1", p1_path)->required();
    omega_cmd->add_option("--p2", p2_path)->required();
    omega_cmd->add_option("--eps", eps_str, "also report the O_eps interval union");
    add_out(omega_cmd);

    auto* bl_cmd = app.add_subcommand("bl", "BL norm and pointwise algebra");
    bl_cmd->add_option("--f", f_path)->required();
    bl_cmd->add_option("--g", g_path);
    std::string bl_op;
    bl_cmd->add_option("--op", bl_op, "add|mul|scale");
    bl_cmd->add_option("--a", scale_str, "scalar for --op scale");
    add_out(bl_cmd);

    auto* lift_cmd = app.add_subcommand("lift", "lift a space to its ball space");
    lift_cmd->add_option("--space", space_path)->required();
    lift_cmd->add_option("--depth", depth);
    lift_cmd->add_option("--out", out_path);

    auto* bs_cmd = app.add_subcommand("ballspace", "enumerate the canonical balls of a space");
    bs_cmd->add_option("--space", space_path)->required();
    bs_cmd->add_option("--variant", variant, "m_flat|m_flat_bar");
    bs_cmd->add_option("--out", out_path);

    auto* measure_cmd = app.add_subcommand("measure", "measure-side computations");
    measure_cmd->require_subcommand(1);
    auto* mnorm = measure_cmd->add_subcommand("norm", "||mu||");
    mnorm->add_option("--m", m_path)->required();
    add_out(mnorm);
    auto* mint = measure_cmd->add_subcommand("integrate", "exact step-function integral");
    mint->add_option("--m", m_path)->required();
    mint->add_option("--f", f_path)->required();
    add_out(mint);
    auto* mdud = measure_cmd->add_subcommand("dudley", "Dudley metric bounds / exact value");
    mdud->add_option("--m1", m1_path)->required();
    mdud->add_option("--m2", m2_path)->required();
    mdud->add_option("--mode", mode, "bounds|exact_small");
    mdud->add_option("--mv", mv, "value-precision parameter M_v");
    add_out(mdud);
    auto* mconv = measure_cmd->add_subcommand("convergence", "convergence analyzer report");
    mconv->add_option("--nu", nu_path)->required();
    mconv->add_option("--family", family, "scaled|constant");
    mconv->add_option("--nmax", nmax);
    add_out(mconv);

    auto* verify_cmd = app.add_subcommand("verify", "run the theorem claim suites");
    verify_cmd->add_option("--seed", seed);
    verify_cmd->add_option("--trials", trials, "override the per-suite trial counts");
    verify_cmd->add_option("--workers", workers, "suite-level parallelism (env LAB_WORKERS)");
    verify_cmd->add_option("--out", out_path, "directory for reports and witnesses");
    verify_cmd->add_option("--format", format, "report format: json|csv");
    verify_cmd->add_option("--inject-bug", inject,
                           "negative control: lemma2.1 flips the intersecting branch");

    try {
        app.parse(argc, argv);

        if (dist_cmd->parsed() || haus_cmd->parsed()) {
            SpacePtr sp = load_space(space_path);
            PointSet a = parse_point_set(*sp, a_csv);
            PointSet b = parse_point_set(*sp, b_csv);
            Rational value = dist_cmd->parsed() ? set_dist(*sp, a, b) : hausdorff(*sp, a, b);
            std::cout << value.str() << "\n";
            emit_report(out_path, Json{{"schema", kSchema},
                                       {"command", dist_cmd->parsed() ? "dist" : "hausdorff"},
                                       {"space", space_path},
                                       {"a", a_csv},
                                       {"b", b_csv},
                                       {"result", value.str()}});
            return 0;
        }

        if (rho_cmd->parsed()) {
            PointMap f = load_point_map(f_path);
            PointMap g0 = load_point_map(g_path);
            PointMap g(f.domain, f.codomain, g0.table);   // share the loaded spaces
            require_compatible(f, g);
            Json result = Json::object();
            auto emit = [&](const std::string& k, const Rational& v) {
                result[k] = v.str();
                if (kind != "all") std::cout << v.str() << "\n";
            };
            if (kind == "H" || kind == "all") emit("rho_H", rho_H(f, g));
            if (kind == "s" || kind == "all") emit("rho_s", rho_s(f, g));
            if (kind == "b" || kind == "all") emit("rho_b", rho_b(f, g));
            if (kind == "u" || kind == "all") emit("rho_u", rho_u(f, g));
            if (result.empty()) throw DocumentError("document: unknown rho kind '" + kind + "'");
            if (kind == "all")
                for (const auto& [k, v] : result.items())
                    std::cout << k << " = " << v.get<std::string>() << "\n";
            emit_report(out_path, Json{{"schema", kSchema},
                                       {"command", "rho"},
                                       {"f", f_path},
                                       {"g", g_path},
                                       {"result", result}});
            return 0;
        }

        if (beta_cmd->parsed()) {
            Rational lambda = Rational::parse(lambda_str);
            auto pair = load_scalar_pair(p1_path, p2_path);
            FeasibilityScan scan = star ? beta_star_scan(lambda, pair.p1, pair.p2)
                                        : beta_scan(lambda, pair.p1, pair.p2);
            Rational value = pair.p1.table == pair.p2.table ? Rational(0) : scan.infimum;
            std::cout << value.str() << "\n";
            Json report{{"schema", kSchema},
                        {"command", star ? "beta_star" : "beta"},
                        {"lambda", lambda.str()},
                        {"p1", p1_path},
                        {"p2", p2_path},
                        {"result", value.str()},
                        {"scan", scan_json(scan)}};
            if (limits) {
                auto lim = beta_limits(pair.p1, pair.p2);
                Json lj{{"beta0", lim.beta0.str()},
                        {"beta_inf", lim.beta_inf.str()},
                        {"beta_star0", lim.beta_star0.str()},
                        {"beta_star_inf", lim.beta_star_inf.str()}};
                for (const auto& [k, v] : lj.items())
                    std::cout << k << " = " << v.get<std::string>() << "\n";
                report["limits"] = std::move(lj);
            }
            emit_report(out_path, report);
            return 0;
        }

        if (adm_cmd->parsed()) {
            ScalarBallMap p = load_scalar_ball_map(p1_path);
            auto rep = admissibility(p);
            std::cout << "d_a = " << rep.admissible_degree.str() << "\n";
            std::cout << "C = " << rep.c_value.str() << "\n";
            Json table = Json::array();
            for (const auto& [eps, c] : rep.c_eps)
                table.push_back(Json{{"eps", eps.str()}, {"C_eps", c.str()}});
            emit_report(out_path, Json{{"schema", kSchema},
                                       {"command", "admissibility"},
                                       {"p", p1_path},
                                       {"d_a", rep.admissible_degree.str()},
                                       {"C", rep.c_value.str()},
                                       {"C_eps", table},
                                       {"finite_model_caveat",
                                        "on finite models any delta below the least coarsening "
                                        "threshold fixes every ball, so d_a = 0"}});
            return 0;
        }

        if (omega_cmd->parsed()) {
            auto pair = load_scalar_pair(p1_path, p2_path);
            Extended oh = omega_hat(pair.p1, pair.p2);
            Extended ohs = omega_hat_star(pair.p1, pair.p2);
            std::cout << "omega_hat = " << oh.str() << "\n";
            std::cout << "omega_hat_star = " << ohs.str() << "\n";
            Json report{{"schema", kSchema},
                        {"command", "omega"},
                        {"p1", p1_path},
                        {"p2", p2_path},
                        {"omega_hat", oh.str()},
                        {"omega_hat_star", ohs.str()}};
            if (!eps_str.empty()) {
                auto rep = omega_eps(pair.p1, pair.p2, Rational::parse(eps_str));
                Json intervals = Json::array();
                for (const auto& iv : rep.o_eps)
                    intervals.push_back(Json{{"lo", iv.lo.str()}, {"hi", iv.hi.str()}});
                std::cout << "omega_eps = " << rep.omega_lower.str()
                          << ", Omega_eps = " << rep.omega_upper.str() << "\n";
                report["O_eps"] = std::move(intervals);
                report["omega_eps"] = rep.omega_lower.str();
                report["Omega_eps"] = rep.omega_upper.str();
            }
            emit_report(out_path, report);
            return 0;
        }

        if (bl_cmd->parsed()) {
            ScalarFunction f = load_scalar_function(f_path);
            Json report{{"schema", kSchema}, {"command", "bl"}, {"f", f_path}};
            if (bl_op.empty()) {
                Rational n = bl_norm(f);
                std::cout << n.str() << "\n";
                report["bl_norm"] = n.str();
            } else {
                ScalarFunction out_fn = f;
                if (bl_op == "scale") {
                    out_fn = bl_scale(Rational::parse(scale_str), f);
                } else {
                    if (g_path.empty())
                        throw DocumentError("document: --op " + bl_op + " needs --g");
                    ScalarFunction g0 = load_scalar_function(g_path);
                    ScalarFunction g(f.domain, f.codomain, g0.table);
                    out_fn = bl_op == "add" ? bl_add(f, g)
                             : bl_op == "mul" ? bl_mul(f, g)
                                              : throw DocumentError("document: unknown --op");
                }
                Rational n = bl_norm(out_fn);
                std::cout << n.str() << "\n";
                report["bl_norm"] = n.str();
                Json values = Json::object();
                for (std::size_t i = 0; i < out_fn.table.size(); ++i)
                    values[std::to_string(i)] = out_fn.table[i].str();
                report["values"] = std::move(values);
            }
            emit_report(out_path, report);
            return 0;
        }

        if (lift_cmd->parsed()) {
            SpacePtr sp = load_space(space_path);
            SpacePtr lifted = lift_space_iterated(sp, static_cast<std::size_t>(depth));
            std::cout << "points " << lifted->size() << ", ultrametric "
                      << (lifted->is_ultrametric() ? "yes" : "no") << "\n";
            if (!out_path.empty()) save_json(out_path, space_to_json(*lifted));
            return 0;
        }

        if (bs_cmd->parsed()) {
            SpacePtr sp = load_space(space_path);
            auto bs = enumerate_balls(sp, variant == "m_flat_bar" ? BallVariant::MFlatBar
                                                                  : BallVariant::MFlat);
            std::cout << "balls " << bs->size() << "\n";
            if (!out_path.empty()) save_json(out_path, ball_space_to_json(*bs));
            return 0;
        }

        if (mnorm->parsed()) {
            LevelMeasure mu = load_measure(m_path);
            std::cout << mu.norm().str() << "\n";
            emit_report(out_path, Json{{"schema", kSchema},
                                       {"command", "measure norm"},
                                       {"m", m_path},
                                       {"result", mu.norm().str()}});
            return 0;
        }

        if (mint->parsed()) {
            LevelMeasure mu = load_measure(m_path);
            Json fj = load_json(f_path);
            io_detail::require(fj.contains("p") && fj.contains("level") && fj.contains("values"),
                               "test function needs p, level, values");
            long long p = fj["p"].get<long long>();
            long long lvl = fj["level"].get<long long>();
            long long count = 1;
            for (long long i = 0; i < lvl; ++i) count *= p;
            auto entries =
                io_detail::table_entries(fj["values"], static_cast<std::size_t>(count));
            std::vector<Rational> vals;
            for (const auto& e : entries) vals.push_back(Rational::parse(e));
            TestFunction f(p, lvl, std::move(vals));
            Rational value = integrate_step(f, mu);
            std::cout << value.str() << "\n";
            emit_report(out_path, Json{{"schema", kSchema},
                                       {"command", "measure integrate"},
                                       {"m", m_path},
                                       {"f", f_path},
                                       {"result", value.str()}});
            return 0;
        }

        if (mdud->parsed()) {
            LevelMeasure m1 = load_measure(m1_path);
            LevelMeasure m2 = load_measure(m2_path);
            DudleyMode dm = mode == "exact_small" ? DudleyMode::ExactSmall : DudleyMode::Bounds;
            DudleyBounds b = dudley(m1, m2, dm, mv);
            std::cout << "lower = " << b.lower.str() << "\n";
            std::cout << "upper = " << b.upper.str() << "\n";
            Json report{{"schema", kSchema},
                        {"command", "measure dudley"},
                        {"m1", m1_path},
                        {"m2", m2_path},
                        {"mode", mode},
                        {"lower", b.lower.str()},
                        {"upper", b.upper.str()},
                        {"note",
                         "exact value is exact for the level-N model and a lower bound for the "
                         "untruncated metric"}};
            if (b.has_exact) {
                std::cout << "exact = " << b.exact.str() << "\n";
                report["exact"] = b.exact.str();
                Json maximizer = Json::array();
                for (const auto& v : b.maximizer) maximizer.push_back(v.str());
                report["maximizer"] = std::move(maximizer);
            }
            emit_report(out_path, report);
            return 0;
        }

        if (mconv->parsed()) {
            LevelMeasure nu = load_measure(nu_path);
            PAdicAbs abs(nu.prime());
            LevelMeasure zero = nu.scaled(Rational(0));
            std::vector<std::pair<std::string, TestFunction>> panel;
            panel.emplace_back("const1", TestFunction(nu.prime(), 0, {Rational(1)}));
            std::vector<Rational> ind(static_cast<std::size_t>(nu.prime()), Rational(0));
            ind[0] = Rational(1);
            panel.emplace_back("chi0", TestFunction(nu.prime(), 1, ind));

            std::function<LevelMeasure(long long)> seq;
            LevelMeasure limit = zero;
            if (family == "scaled") {
                seq = [&](long long n) {
                    Rational s(1);
                    for (long long i = 0; i < n; ++i) s = s * Rational(nu.prime());
                    return nu.scaled(s);
                };
            } else if (family == "constant") {
                seq = [&](long long) { return nu; };
                limit = nu;
            } else {
                throw DocumentError("document: unknown family '" + family + "'");
            }
            auto rep = convergence_analyzer(seq, limit, panel, nmax, nu.norm());

            std::string header = "n,rho_s,beta,dudley_lower,dudley_upper";
            for (const auto& name : rep.panel_names) header += ",panel_" + name;
            header += ",verdict";
            std::cout << header << "\n";
            std::string csv = header + "\n";
            Json rows = Json::array();
            for (const auto& row : rep.rows) {
                std::string line = std::to_string(row.n) + "," + row.rho_s.str() + "," +
                                   row.beta.str() + "," + row.dudley_lower.str() + "," +
                                   row.dudley_upper.str();
                for (const auto& v : row.panel) line += "," + v.str();
                line += row.verdict ? ",PASS" : ",FAIL";
                std::cout << line << "\n";
                csv += line + "\n";
                Json jrow{{"n", row.n},
                          {"rho_s", row.rho_s.str()},
                          {"beta", row.beta.str()},
                          {"dudley_lower", row.dudley_lower.str()},
                          {"dudley_upper", row.dudley_upper.str()},
                          {"verdict", row.verdict ? "PASS" : "FAIL"}};
                Json jpanel = Json::object();
                for (std::size_t i = 0; i < row.panel.size(); ++i)
                    jpanel[rep.panel_names[i]] = row.panel[i].str();
                jrow["panel"] = std::move(jpanel);
                rows.push_back(std::move(jrow));
            }
            if (!out_path.empty()) {
                if (format == "csv") {
                    std::ofstream out(out_path);
                    if (!out) throw DocumentError("document: cannot write " + out_path);
                    out << csv;
                } else {
                    save_json(out_path, Json{{"schema", kSchema},
                                             {"command", "measure convergence"},
                                             {"family", family},
                                             {"rows", rows}});
                }
            }
            return 0;
        }

        if (verify_cmd->parsed())
            return run_verify(seed, trials, workers, out_path, format, inject);

        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        Json err{{"schema", kSchema}, {"error", e.what()}};
        std::cout << err.dump(2) << "\n";
        return 2;
    }
}
