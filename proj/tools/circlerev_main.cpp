#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "circlerev/factorization.hpp"
#include "circlerev/generator.hpp"
#include "circlerev/json_io.hpp"
#include "circlerev/report.hpp"

namespace fs = std::filesystem;
using namespace circlerev;

namespace {

struct CommonFlags {
    long max_period = 64;
    long max_iterations = 100000;
    std::size_t samples = 512;
    std::uint64_t seed = 1;
    bool json = false;
};

void add_common(CLI::App* cmd, CommonFlags& fl) {
    cmd->add_option("--max-period", fl.max_period, "largest denominator tested for rationality");
    cmd->add_option("--max-iter", fl.max_iterations, "lift iterations for the rotation bracket");
    cmd->add_option("--samples", fl.samples, "verification sample count");
    cmd->add_option("--seed", fl.seed, "seed for sampling and generation");
    cmd->add_flag("--json", fl.json, "emit the JSON report on stdout");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PLMap load_map(const std::string& path, std::string* raw = nullptr) {
    std::string text = read_file(path);
    if (raw) *raw = text;
    return plmap_from_json(Json::parse(text));
}

DecisionOptions decision_options(const CommonFlags& fl) {
    DecisionOptions opt;
    opt.max_period = fl.max_period;
    opt.max_iterations = fl.max_iterations;
    return opt;
}

FactorOptions factor_options(const CommonFlags& fl) {
    FactorOptions opt;
    opt.max_period = fl.max_period;
    opt.max_iterations = fl.max_iterations;
    opt.plan.deterministic = fl.samples / 2;
    opt.plan.random = fl.samples - fl.samples / 2;
    opt.plan.seed = fl.seed;
    return opt;
}

Report base_report(const std::string& command, const PLMap& f, const CommonFlags& fl) {
    Report rep;
    rep.command = command;
    rep.input_digest = digest_hex(plmap_to_json(f).dump());
    rep.seed = fl.seed;
    rep.params["max_period"] = fl.max_period;
    rep.params["max_iter"] = fl.max_iterations;
    rep.params["samples"] = fl.samples;
    return rep;
}

void emit(const Report& rep, const CommonFlags& fl, const std::string& human) {
    if (fl.json)
        std::cout << rep.dump();
    else
        std::cout << human;
}

int cmd_analyze(const std::string& path, const CommonFlags& fl) {
    PLMap f = load_map(path);
    Report rep = base_report("analyze", f, fl);
    std::ostringstream human;
    rep.results["degree"] = f.degree();
    rep.results["breakpoints"] = f.breakpoint_count();
    human << "degree " << f.degree() << ", " << f.breakpoint_count() << " vertices\n";
    FixSet fix = fixed_points(f);
    rep.results["fixed_set"] = fixset_to_json(fix);
    if (f.degree() == 1) {
        RotationNumberResult r = rotation_number(f, fl.max_period, fl.max_iterations);
        rep.results["rotation_number"] = rotation_to_json(r);
        if (r.is_rational()) {
            human << "rotation number " << rat_to_string(r.rho) << ", minimal period " << r.period
                  << "\n";
            if (r.rho == 0) {
                SignatureWord w = signature(f);
                rep.results["signature"] = word_to_json(w);
                human << "signature word " << render_word_human(w) << "\n";
            }
        } else {
            human << "rotation number in [" << rat_to_string(r.lo) << ", " << rat_to_string(r.hi)
                  << "] after " << r.iterations << " iterations; rationality undecided\n";
        }
    } else {
        human << "orientation reversing; fixed points " << fix.comps[0].a.str() << ", "
              << fix.comps[1].a.str() << "\n";
    }
    emit(rep, fl, human.str());
    return 0;
}

int cmd_decide(const std::string& path, const std::string& group, const CommonFlags& fl) {
    PLMap f = load_map(path);
    Report rep = base_report("decide", f, fl);
    rep.params["group"] = group;
    Verdict v = group == "hplus" ? decide_strongly_reversible_hplus(f, decision_options(fl))
                                 : decide_strongly_reversible_h(f, decision_options(fl));
    rep.results["decision"] = verdict_to_json(v);
    std::ostringstream human;
    human << (v.yes() ? "yes" : v.no() ? "no" : "unknown") << ": " << v.reason << "\n";
    emit(rep, fl, human.str());
    return v.yes() ? 0 : v.no() ? 1 : 2;
}

int cmd_factor(const std::string& path, const std::string& group, int involutions,
               const std::string& out, const CommonFlags& fl) {
    PLMap f = load_map(path);
    Report rep = base_report("factor", f, fl);
    rep.params["group"] = group;
    rep.params["involutions"] = involutions;
    std::ostringstream human;
    Witness w;
    if (involutions == 3) {
        if (f.degree() != 1) {
            std::cerr << "three-involution factorization needs an orientation preserving map\n";
            return 1;
        }
        w = factor_three_involutions(f, factor_options(fl));
    } else {
        Verdict v = group == "hplus" ? decide_strongly_reversible_hplus(f, decision_options(fl))
                                     : decide_strongly_reversible_h(f, decision_options(fl));
        rep.results["decision"] = verdict_to_json(v);
        if (v.unknown()) {
            human << "unknown: " << v.reason << "\n";
            emit(rep, fl, human.str());
            return 2;
        }
        if (v.no()) {
            human << "refused: " << v.reason << "\n";
            emit(rep, fl, human.str());
            return 1;
        }
        w = factor_strongly_reversible(f, v, factor_options(fl));
    }
    Json archive = witness_to_json(w);
    if (!out.empty()) {
        std::ofstream o(out);
        o << archive.dump(2) << "\n";
    }
    rep.results["witness"] = std::move(archive);
    human << "route " << route_name(w.route) << "; " << w.involutions.size()
          << " involution(s); verification "
          << (w.verification.all_pass ? "all-pass" : "FAILED") << " over "
          << w.verification.samples << " samples\n";
    emit(rep, fl, human.str());
    return w.verification.all_pass ? 0 : 1;
}

int cmd_random(const GeneratorSpec& base, int count, const std::string& outdir,
               const CommonFlags& fl) {
    fs::create_directories(outdir);
    Report rep;
    rep.command = "random";
    rep.seed = fl.seed;
    rep.params["count"] = count;
    Json files = Json::array();
    std::ostringstream human;
    for (int i = 0; i < count; ++i) {
        GeneratorSpec spec = base;
        spec.seed = fl.seed + (std::uint64_t)i;
        GeneratedMap g = random_pl_homeo(spec);
        Json j = plmap_to_json(g.map);
        j["certificate"] = g.certificate;
        std::string name = "map_" + std::to_string(i) + ".json";
        std::ofstream o(fs::path(outdir) / name);
        o << j.dump(2) << "\n";
        Json e;
        e["file"] = name;
        e["digest"] = digest_hex(plmap_to_json(g.map).dump());
        e["certificate"] = g.certificate;
        files.push_back(std::move(e));
        human << name << ": " << g.certificate << "\n";
    }
    rep.input_digest = digest_hex(rep.params.dump());
    rep.results["files"] = std::move(files);
    emit(rep, fl, human.str());
    return 0;
}

int cmd_verify(const std::string& archive_path, const std::string& map_path,
               const CommonFlags& fl) {
    Json j = Json::parse(read_file(archive_path));
    Witness w = witness_from_json(j);
    PLMap f = load_map(map_path);
    Report rep = base_report("verify", f, fl);
    std::ostringstream human;
    if (!(w.target == f)) {
        rep.results["match"] = false;
        human << "archive does not match the map\n";
        emit(rep, fl, human.str());
        return 1;
    }
    SamplePlan plan;
    plan.deterministic = fl.samples / 2;
    plan.random = fl.samples - fl.samples / 2;
    plan.seed = fl.seed;
    VerificationReport vr = verify_witness(w, plan);
    rep.results["verification"] = verification_to_json(vr);
    human << (vr.all_pass ? "all-pass" : "FAILED") << " over " << vr.samples << " samples\n";
    if (!vr.all_pass && vr.failing_sample)
        human << "failing sample " << vr.failing_sample->str() << " (" << vr.failed_check << ")\n";
    emit(rep, fl, human.str());
    return vr.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact analysis of piecewise-linear circle homeomorphisms"};
    app.require_subcommand(1);

    CommonFlags fl;
    std::string map_path, group = "h", archive_path, out_path, outdir = ".";
    int involutions = 2, count = 1;
    GeneratorSpec gspec;
    std::string rho_text, word_text;
    int fixed_points_opt = 0;

    CLI::App* analyze = app.add_subcommand("analyze", "fixed set, signature, rotation number");
    analyze->add_option("map", map_path, "map JSON file")->required();
    add_common(analyze, fl);

    CLI::App* decide = app.add_subcommand("decide", "strong reversibility decision");
    decide->add_option("map", map_path, "map JSON file")->required();
    decide->add_option("--group", group, "hplus or h")->check(CLI::IsMember({"hplus", "h"}));
    add_common(decide, fl);

    CLI::App* factor = app.add_subcommand("factor", "construct and verify involutions");
    factor->add_option("map", map_path, "map JSON file")->required();
    factor->add_option("--group", group, "hplus or h")->check(CLI::IsMember({"hplus", "h"}));
    factor->add_option("--involutions", involutions, "2 or 3")->check(CLI::IsMember({2, 3}));
    factor->add_option("--out", out_path, "witness archive output path");
    add_common(factor, fl);

    CLI::App* random = app.add_subcommand("random", "generate a corpus of maps");
    random->add_option("--degree", gspec.degree, "1 or -1")->check(CLI::IsMember({1, -1}));
    random->add_option("--breakpoints", gspec.breakpoints, "breakpoint budget");
    random->add_option("--rho", rho_text, "rotation number constraint p/q");
    random->add_option("--word", word_text, "signature word constraint, e.g. P+P-");
    random->add_option("--fixed-points", fixed_points_opt, "fixed point count constraint");
    random->add_option("--count", count, "number of maps");
    random->add_option("--out-dir", outdir, "output directory");
    add_common(random, fl);

    CLI::App* verify = app.add_subcommand("verify", "re-check a witness archive");
    verify->add_option("archive", archive_path, "witness archive JSON")->required();
    verify->add_option("map", map_path, "map JSON file")->required();
    add_common(verify, fl);

    CLI11_PARSE(app, argc, argv);

    auto started = std::chrono::steady_clock::now();
    int rc = 0;
    try {
        if (*analyze) rc = cmd_analyze(map_path, fl);
        if (*decide) rc = cmd_decide(map_path, group, fl);
        if (*factor) rc = cmd_factor(map_path, group, involutions, out_path, fl);
        if (*random) {
            if (!rho_text.empty()) gspec.rho = rat_from_string(rho_text);
            if (!word_text.empty()) gspec.word = word_text;
            if (fixed_points_opt > 0) gspec.fixed_point_count = fixed_points_opt;
            rc = cmd_random(gspec, count, outdir, fl);
        }
        if (*verify) rc = cmd_verify(archive_path, map_path, fl);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          started)
                    .count();
    std::cerr << "elapsed " << ms << " ms\n";
    return rc;
}
