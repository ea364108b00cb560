// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)
//
// Batch front-end: samples admissible instances for every identity in the
// registry, runs the residual suites with deterministic seeds, and emits
// human or structured (JSONL) reports.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellipsum/harness.hpp"

namespace {

using nlohmann::json;
using namespace ellipsum;

cplx parse_cplx(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw config_error("complex values are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<cplx> parse_cplx_list(const json& j) {
    std::vector<cplx> out;
    for (const auto& e : j) out.push_back(parse_cplx(e));
    return out;
}

sampler_config load_config(const std::string& path) {
    sampler_config cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<std::uint64_t>();
    if (j.contains("p_values")) cfg.p_values = parse_cplx_list(j["p_values"]);
    if (j.contains("annulus")) {
        cfg.r_min = j["annulus"][0].get<double>();
        cfg.r_max = j["annulus"][1].get<double>();
    }
    if (j.contains("base_annulus")) {
        cfg.base_r_min = j["base_annulus"][0].get<double>();
        cfg.base_r_max = j["base_annulus"][1].get<double>();
    }
    if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
    if (j.contains("retry_cap")) cfg.retry_cap = j["retry_cap"].get<int>();
    if (j.contains("shape")) {
        const json& s = j["shape"];
        auto get = [&](const char* key, int fallback) {
            return s.contains(key) ? s[key].get<int>() : fallback;
        };
        cfg.shape.s_max = get("s_max", cfg.shape.s_max);
        cfg.shape.r_max = get("r_max", cfg.shape.r_max);
        cfg.shape.l_max = get("l_max", cfg.shape.l_max);
        cfg.shape.m_max = get("m_max", cfg.shape.m_max);
        cfg.shape.y_max = get("y_max", cfg.shape.y_max);
        cfg.shape.n_upper = get("n_upper", cfg.shape.n_upper);
        cfg.shape.l_upper = get("l_upper", cfg.shape.l_upper);
        cfg.shape.window_max = get("window_max", cfg.shape.window_max);
        cfg.shape.list_max = get("list_max", cfg.shape.list_max);
    }
    if (!(cfg.r_min < cfg.r_max)) throw config_error("annulus needs r_min < r_max");
    if (!(cfg.delta > 0.0)) throw config_error("delta must be positive");
    if (cfg.retry_cap < 1) throw config_error("retry_cap must be positive");
    return cfg;
}

refined_base base_from_json(const json& j) {
    const nome nm(j.contains("p") ? parse_cplx(j["p"]) : cplx{0.0, 0.0});
    const cplx q_star = parse_cplx(j.at("q_star"));
    const int y = j.contains("Y") ? j["Y"].get<int>() : 1;
    return refined_base(q_star, y, nm);
}

int run_solve_balance(const std::string& mode, const std::string& params_path) {
    std::ifstream in(params_path);
    if (!in) throw config_error("cannot open params file: " + params_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw config_error(std::string("params parse error: ") + e.what());
    }
    const refined_base base = base_from_json(j);
    std::vector<cplx> solutions;

    if (mode == "akms_b") {
        const auto c = parse_cplx_list(j.at("c"));
        const auto m = j.at("m").get<std::vector<int>>();
        const auto y = j.at("y").get<std::vector<int>>();
        const int N = j.at("N").get<int>();
        solutions.push_back(solve_akms_b(c, m, y, N, base));
        if (j.contains("verify")) {
            two_term_instance inst{{1.0, 0.0}, parse_cplx(j["verify"]), N, 0, c, m, y, base};
            verify_balance(balance_mode::akms_b, inst);
        }
    } else if (mode == "npc") {
        const auto c = parse_cplx_list(j.at("c"));
        const auto m = j.at("m").get<std::vector<int>>();
        const auto y = j.at("y").get<std::vector<int>>();
        const int N = j.at("N").get<int>();
        const int L = j.at("L").get<int>();
        solutions = solve_npc_b(N, L, c, m, y, base);
        if (j.contains("verify")) {
            two_term_instance inst{{1.0, 0.0}, parse_cplx(j["verify"]), N, L, c, m, y, base};
            verify_balance(balance_mode::npc, inst);
        }
    } else if (mode == "apc") {
        km_instance inst{parse_cplx_list(j.at("a")), parse_cplx_list(j.at("b")),
                         j.at("l").get<std::vector<int>>(), j.at("m").get<std::vector<int>>(),
                         j.at("y").get<std::vector<int>>(), base};
        if (j.contains("verify_instance") && j["verify_instance"].get<bool>()) {
            verify_balance(balance_mode::apc, inst);
            solutions.push_back(inst.a.back());
        } else {
            const std::string free = j.contains("free") ? j["free"].get<std::string>() : "a:0";
            const auto sep = free.find(':');
            const std::size_t idx =
                sep == std::string::npos ? 0 : std::stoul(free.substr(sep + 1));
            if (free.rfind("b", 0) == 0)
                solutions.push_back(solve_apc_free_b(inst, idx));
            else
                solutions.push_back(solve_apc_free_a(inst, idx));
        }
    } else {
        throw config_error("unknown balance mode: " + mode);
    }

    std::cout << "{\"mode\":\"" << mode << "\",\"solutions\":[";
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        if (i) std::cout << ",";
        std::cout << ellipsum::detail::fmt(solutions[i]);
    }
    std::cout << "]}\n";
    return 0;
}

std::vector<trial_report> parse_structured(std::istream& in) {
    std::vector<trial_report> reports;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw config_error(std::string("report parse error: ") + e.what());
        }
        trial_report rep;
        rep.identity = j.at("identity").get<std::string>();
        rep.trial = j.at("trial").get<std::uint64_t>();
        rep.shape = j.value("shape", "");
        rep.residual = j.at("residual").is_number() ? j["residual"].get<double>()
                                                    : std::numeric_limits<double>::quiet_NaN();
        rep.tolerance = j.at("tolerance").get<double>();
        rep.pass = j.at("pass").get<bool>();
        rep.reason = j.value("reason", "");
        if (j.contains("params")) rep.params = j["params"].dump();
        reports.push_back(std::move(rep));
    }
    return reports;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical verification suite for theta-function identity families"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "sample instances and check identities");
    std::string identity = "all";
    std::string config_path;
    std::string format = "human";
    std::string out_path;
    std::optional<double> tolerance;
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::uint64_t> trials_flag;
    verify->add_option("identity", identity, "identity name or 'all'");
    verify->add_option("--config", config_path, "JSON config file");
    verify->add_option("--tolerance", tolerance, "override every tolerance");
    verify->add_option("--seed", seed_flag, "override the sampler seed");
    verify->add_option("--trials", trials_flag, "trials per identity");
    verify->add_option("--format", format, "human|structured")
        ->check(CLI::IsMember({"human", "structured"}));
    verify->add_option("--out", out_path, "write the report here instead of stdout");

    // solve-balance
    auto* solve = app.add_subcommand("solve-balance", "solve a balancing constraint");
    std::string mode;
    std::string params_path;
    solve->add_option("mode", mode, "apc|npc|akms_b")->required();
    solve->add_option("--params", params_path, "JSON parameter file")->required();

    // report
    auto* report = app.add_subcommand("report", "re-render a structured report");
    std::string in_path;
    std::string report_fmt = "human";
    report->add_option("--in", in_path, "structured report file (JSONL)")->required();
    report->add_option("--format", report_fmt, "human|structured")
        ->check(CLI::IsMember({"human", "structured"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve_balance(mode, params_path);

        if (report->parsed()) {
            std::ifstream in(in_path);
            if (!in) throw config_error("cannot open report file: " + in_path);
            const auto reports = parse_structured(in);
            std::cout << emit_report(reports, report_fmt == "human" ? report_format::human
                                                                    : report_format::structured);
            return suite_exit_code(reports);
        }

        sampler_config cfg = load_config(config_path);
        if (const char* env_seed = std::getenv("ELLIPSUM_SEED"))
            cfg.seed = std::strtoull(env_seed, nullptr, 10);
        if (seed_flag) cfg.seed = *seed_flag;
        if (trials_flag) cfg.trials = *trials_flag;

        const std::vector<std::string> names =
            identity == "all" ? all_identity_names() : std::vector<std::string>{identity};
        const auto reports = run_suite(cfg, names, tolerance);
        const std::string text = emit_report(
            reports, format == "human" ? report_format::human : report_format::structured);
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw config_error("cannot open output file: " + out_path);
            out << text;
        }
        return suite_exit_code(reports);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
