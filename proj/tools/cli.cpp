#include "cli.hpp"

#include "oracles.hpp"
#include "selfsim/errors.hpp"
#include "selfsim/family_diag.hpp"
#include "selfsim/family_shift.hpp"
#include "selfsim/render.hpp"
#include "selfsim/tiling_qp.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace selfsim::cli {

namespace {

struct RunConfig {
    long p = 3;
    std::string eps = "0";
    int depth = 7;
    std::string size;
    std::string out;
    long k = 0;
    std::string c = "2";
    bool demo_float = false;
    std::string grid;
    std::string suite;
};

struct Size {
    std::size_t w;
    std::size_t h;
};

Size parse_size(const std::string& text, Size fallback) {
    if (text.empty()) return fallback;
    const auto x = text.find('x');
    if (x == std::string::npos) throw InvalidParameter("--size expects WxH, got '" + text + "'");
    try {
        std::size_t used = 0;
        const unsigned long w = std::stoul(text.substr(0, x), &used);
        if (used != x) throw InvalidParameter("bad width");
        const std::string rest = text.substr(x + 1);
        const unsigned long h = std::stoul(rest, &used);
        if (used != rest.size() || w == 0 || h == 0) throw InvalidParameter("bad height");
        return Size{w, h};
    } catch (const std::logic_error&) {
        throw InvalidParameter("--size expects WxH with positive integers, got '" + text + "'");
    }
}

/// "lo:hi:step" -> lo, lo + step, ..., up to hi.
std::vector<Rational> parse_grid(const std::string& text) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? a : text.find(':', a + 1);
    if (b == std::string::npos) throw InvalidParameter("--grid expects lo:hi:step, got '" + text + "'");
    const Rational lo = Rational::parse(text.substr(0, a));
    const Rational hi = Rational::parse(text.substr(a + 1, b - a - 1));
    const Rational step = Rational::parse(text.substr(b + 1));
    if (step.sign() <= 0) throw InvalidParameter("--grid step must be positive");
    if (hi < lo) throw InvalidParameter("--grid needs lo <= hi");
    if ((hi - lo) / step > Rational(100000)) throw ResourceError("--grid has more than 100000 points");
    std::vector<Rational> out;
    for (Rational e = lo; e <= hi; e += step) out.push_back(e);
    return out;
}

nlohmann::json integer_json(const BigInt& v) {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
}

nlohmann::json shift_report(long p, const Rational& eps) {
    const TopologyReport r = component_count(ShiftParams::make(p, eps));
    nlohmann::json j{{"p", r.p},
                     {"eps", r.eps.str()},
                     {"n", r.cell_level},
                     {"components", integer_json(r.component_count)},
                     {"is_tile", r.is_tile},
                     {"cells_disklike", r.cells_disklike},
                     {"global_disklike", r.global_disklike}};
    if (r.graph_level) {
        j["graph"] = {{"level", *r.graph_level},
                      {"interior_components", *r.graph_interior_components},
                      {"closed_components", *r.graph_closed_components}};
    }
    return j;
}

nlohmann::json diag_report(long p, const Rational& eps) {
    const DiagParams params = DiagParams::make(p, eps);
    if (p < 0) {
        // Certificates are built for p > 0; the verdict follows the closed form.
        return {{"p", p}, {"eps", eps.str()}, {"verdict", is_connected(params) ? "Connected" : "Disconnected"},
                {"certified", false}};
    }
    nlohmann::json j = to_json(connectivity_certificate(params));
    if (const auto osc = osc_failure_witness(params)) {
        j["osc_failure"] = {{"ell", osc->ell}, {"k", osc->k}};
    }
    return j;
}

nlohmann::json render_report(const std::string& path, const RasterImage& img, bool flood) {
    const std::string bytes = encode_ppm(img);
    write_file_atomic(path, bytes);
    nlohmann::json j{{"out", path},
                     {"width", img.width()},
                     {"height", img.height()},
                     {"sha256", sha256_hex(bytes)},
                     {"black_pixels", img.black_count()}};
    if (flood) j["flood_components"] = flood_components(img);
    return j;
}

void require(bool present, const char* flag) {
    if (!present) throw InvalidParameter(std::string("missing required flag ") + flag);
}

int dispatch(const CLI::App& app, const RunConfig& cfg, std::ostream& out) {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const bool has_eps = name != "oracle" && sub->count("--eps") > 0;

    if (name == "shift-analyze" || name == "diag-analyze") {
        const bool shift = name == "shift-analyze";
        if (!cfg.grid.empty()) {
            nlohmann::json all = nlohmann::json::array();
            for (const Rational& e : parse_grid(cfg.grid)) all.push_back(shift ? shift_report(cfg.p, e) : diag_report(cfg.p, e));
            out << all.dump(2) << '\n';
            return 0;
        }
        require(has_eps, "--eps");
        const Rational eps = Rational::parse(cfg.eps);
        out << (shift ? shift_report(cfg.p, eps) : diag_report(cfg.p, eps)).dump(2) << '\n';
        return 0;
    }
    if (name == "shift-render" || name == "diag-render") {
        require(has_eps, "--eps");
        require(!cfg.out.empty(), "--out");
        const Rational eps = Rational::parse(cfg.eps);
        if (name == "shift-render") {
            const Size s = parse_size(cfg.size, Size{729, 243});
            const RasterImage img = render_shift(ShiftParams::make(cfg.p, eps), cfg.depth, s.w, s.h);
            out << render_report(cfg.out, img, true).dump(2) << '\n';
        } else {
            const Size s = parse_size(cfg.size, Size{729, 729});
            const RasterImage img = render_diag(DiagParams::make(cfg.p, eps), cfg.depth, s.w, s.h);
            out << render_report(cfg.out, img, false).dump(2) << '\n';
        }
        return 0;
    }
    if (name == "qp-check") {
        require(has_eps, "--eps");
        if (cfg.demo_float) {
            long double value = 0;
            try {
                std::size_t used = 0;
                value = std::stold(cfg.eps, &used);
                if (used != cfg.eps.size()) throw InvalidParameter("trailing characters");
            } catch (const std::logic_error&) {
                throw ParseError("--eps '" + cfg.eps + "' is not a floating-point number");
            }
            const long k_max = cfg.k > 0 ? cfg.k : 10;
            out << to_json(is_quasi_periodic_demo(cfg.p, value, cfg.eps, k_max)).dump(2) << '\n';
        } else {
            const long k = cfg.k > 0 ? cfg.k : 3;
            const ShiftParams params = ShiftParams::make(cfg.p, Rational::parse(cfg.eps));
            out << to_json(is_quasi_periodic(params, Rational::parse(cfg.c), k)).dump(2) << '\n';
        }
        return 0;
    }
    if (name == "qp-patch") {
        require(has_eps, "--eps");
        require(cfg.k > 0, "--k");
        const TranslateSet set = dset_k(ShiftParams::make(cfg.p, Rational::parse(cfg.eps)), cfg.k);
        const std::string text = patch_text(set);
        if (cfg.out.empty()) {
            out << text;
        } else {
            write_file_atomic(cfg.out, text);
            out << nlohmann::json{{"out", cfg.out}, {"level", set.level}, {"points", set.points.size()}}.dump(2) << '\n';
        }
        return 0;
    }
    if (name == "oracle") {
        const oracle::SuiteResult r = oracle::run_suite(cfg.suite);
        out << nlohmann::json{{"suite", r.suite}, {"checks", r.checks}, {"failures", r.failures}, {"ok", r.ok()}}.dump(2)
            << '\n';
        return r.ok() ? 0 : 1;
    }
    throw InvalidParameter("unknown subcommand " + name);
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message) {
    err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact topology of two families of planar self-similar sets", "selfsim"};
    app.require_subcommand(1, 1);
    RunConfig cfg;

    const auto add_params = [&](CLI::App* sub, bool p_required = true) {
        auto* p = sub->add_option("--p", cfg.p, "Expansion factor p");
        if (p_required) p->required();
        sub->add_option("--eps", cfg.eps, "Shift parameter: a/b, integer or exact decimal");
    };
    const auto add_render = [&](CLI::App* sub) {
        add_params(sub);
        sub->add_option("--depth", cfg.depth, "Sampling depth")->check(CLI::Range(1, 12));
        sub->add_option("--size", cfg.size, "Image size WxH");
        sub->add_option("--out", cfg.out, "Output PPM path");
    };

    auto* shift_analyze = app.add_subcommand("shift-analyze", "Tile topology report for the x-shifted family");
    add_params(shift_analyze);
    shift_analyze->add_option("--grid", cfg.grid, "Run over lo:hi:step instead of a single --eps");
    add_render(app.add_subcommand("shift-render", "Render the x-shifted family as PPM"));
    auto* diag_analyze = app.add_subcommand("diag-analyze", "Connectivity certificate for the diagonal family");
    add_params(diag_analyze);
    diag_analyze->add_option("--grid", cfg.grid, "Run over lo:hi:step instead of a single --eps");
    add_render(app.add_subcommand("diag-render", "Render the diagonal family as PPM"));
    auto* qp_check = app.add_subcommand("qp-check", "Quasi-periodicity of the induced tiling");
    add_params(qp_check);
    qp_check->add_flag("--demo-float", cfg.demo_float, "Read --eps as a float (non-certified demonstration)");
    qp_check->add_option("--k", cfg.k, "Patch level (exact) or largest k (demo)");
    qp_check->add_option("--c", cfg.c, "Census box side");
    auto* qp_patch = app.add_subcommand("qp-patch", "Write the translate set D_k");
    add_params(qp_patch);
    qp_patch->add_option("--k", cfg.k, "Patch level")->required();
    qp_patch->add_option("--out", cfg.out, "Output path (stdout when omitted)");
    auto* oracle_cmd = app.add_subcommand("oracle", "Run an independent cross-check suite");
    oracle_cmd->add_option("--suite", cfg.suite, "strips, components, diag or census")
        ->required()
        ->check(CLI::IsMember({"strips", "components", "diag", "census"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        write_error(err, "usage", e.what());
        return 2;
    }

    try {
        return dispatch(app, cfg, out);
    } catch (const Error& e) {
        write_error(err, e.kind(), e.what());
        return 2;
    } catch (const std::exception& e) {
        write_error(err, "internal", e.what());
        return 2;
    }
}

}  // namespace selfsim::cli
