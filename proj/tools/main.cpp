// dirac-spectra: spectral analysis of 2x2 Dirac-type boundary value problems
// and the Timoshenko beam reduction.  See README.md for the config schema.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dirac/basis.hpp"
#include "dirac/core.hpp"
#include "dirac/determinant.hpp"
#include "dirac/kernels.hpp"
#include "dirac/propagator.hpp"
#include "dirac/regularity.hpp"
#include "dirac/spectra.hpp"
#include "dirac/timoshenko.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace dirac;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[32];
    if (v == 0.0) v = 0.0;  // normalize -0
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx parse_cplx(const json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2) return cplx(j[0].get<double>(), j[1].get<double>());
    throw ConfigError("complex values must be a number or [re, im]");
}

std::vector<cplx> parse_cplx_list(const json& j, int m) {
    if (!j.is_array()) throw ConfigError("expected an array of samples");
    std::vector<cplx> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(parse_cplx(v));
    if (int(out.size()) != m + 1) throw ConfigError("sample arrays must have grid_m + 1 entries");
    return out;
}

struct RunConfig {
    Weights weights{-1.0, 1.0};
    PotentialGrid potential{PotentialGrid::zero(2)};
    BoundaryPair bc{BoundaryPair::periodic()};
    std::optional<double> strip;
    double re_min = -20.0, re_max = 20.0;
    int grid_m = 512;
    int grid_n = 256;
    json beam;  // raw beam section for cmd_timoshenko
    std::optional<double> coupling_scale;
};

Weights parse_weights(const json& j) {
    if (!j.contains("b1") || !j.contains("b2"))
        throw ConfigError("weights: b1 and b2 are required");
    std::optional<std::pair<long, long>> tag;
    if (j.contains("rational")) {
        const auto& r = j["rational"];
        if (!r.is_array() || r.size() != 2) throw ConfigError("weights.rational must be [n1, n2]");
        tag = std::make_pair(r[0].get<long>(), r[1].get<long>());
    }
    try {
        return Weights(j["b1"].get<double>(), j["b2"].get<double>(), tag);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

PotentialGrid parse_potential(const json& j, int grid_m) {
    const std::string type = j.value("type", "zero");
    if (type == "zero") return PotentialGrid::zero(grid_m);
    if (type == "constant") {
        std::vector<cplx> q12(grid_m + 1, j.contains("q12") ? parse_cplx(j["q12"]) : cplx(0)),
            q21(grid_m + 1, j.contains("q21") ? parse_cplx(j["q21"]) : cplx(0));
        std::vector<cplx> q11, q22;
        if (j.contains("q11")) q11.assign(grid_m + 1, parse_cplx(j["q11"]));
        if (j.contains("q22")) q22.assign(grid_m + 1, parse_cplx(j["q22"]));
        return PotentialGrid(grid_m, std::move(q12), std::move(q21), std::move(q11),
                             std::move(q22));
    }
    if (type == "samples") {
        std::vector<cplx> q11, q22;
        if (j.contains("q11")) q11 = parse_cplx_list(j["q11"], grid_m);
        if (j.contains("q22")) q22 = parse_cplx_list(j["q22"], grid_m);
        return PotentialGrid(grid_m, parse_cplx_list(j.at("q12"), grid_m),
                             parse_cplx_list(j.at("q21"), grid_m), std::move(q11),
                             std::move(q22));
    }
    throw ConfigError("potential.type must be zero | constant | samples");
}

BoundaryPair parse_bc(const json& j) {
    if (j.contains("preset")) {
        const std::string p = j["preset"].get<std::string>();
        if (p == "periodic") return BoundaryPair::periodic();
        if (p == "antiperiodic") return BoundaryPair::antiperiodic();
        if (p == "separated") {
            // the running example a = d = 0, b = 1, c = -2
            cplx b = j.contains("b") ? parse_cplx(j["b"]) : cplx(1.0);
            cplx c = j.contains("c") ? parse_cplx(j["c"]) : cplx(-2.0);
            return ReducedBC::separated(b, c).rows();
        }
        throw ConfigError("bc.preset must be periodic | antiperiodic | separated");
    }
    if (j.contains("reduced")) {
        const auto& r = j["reduced"];
        return ReducedBC{parse_cplx(r.at("a")), parse_cplx(r.at("b")), parse_cplx(r.at("c")),
                         parse_cplx(r.at("d"))}
            .rows();
    }
    if (j.contains("rows")) {
        const auto& rows = j["rows"];
        if (!rows.is_array() || rows.size() != 2 || rows[0].size() != 4 || rows[1].size() != 4)
            throw ConfigError("bc.rows must be two rows of four coefficients");
        Eigen::Vector4cd r1, r2;
        for (int k = 0; k < 4; ++k) {
            r1(k) = parse_cplx(rows[0][k]);
            r2(k) = parse_cplx(rows[1][k]);
        }
        return BoundaryPair::from_rows(r1, r2);
    }
    throw ConfigError("bc: need preset, reduced, or rows");
}

RunConfig load_config(const std::string& path, const CLI::App& overrides) {
    json j;
    {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config " + path);
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
    }
    RunConfig cfg;
    try {
        if (j.contains("grid_m")) cfg.grid_m = j["grid_m"].get<int>();
        if (j.contains("grid_n")) cfg.grid_n = j["grid_n"].get<int>();
        if (auto* o = overrides.get_option_no_throw("--grid-m"); o && o->count())
            cfg.grid_m = o->as<int>();
        if (auto* o = overrides.get_option_no_throw("--grid-n"); o && o->count())
            cfg.grid_n = o->as<int>();
        if (cfg.grid_m < 2 || cfg.grid_n < 4) throw ConfigError("grids too coarse");

        if (j.contains("weights")) cfg.weights = parse_weights(j["weights"]);
        if (j.contains("potential"))
            cfg.potential = parse_potential(j["potential"], cfg.grid_m);
        else
            cfg.potential = PotentialGrid::zero(cfg.grid_m);
        if (j.contains("bc")) cfg.bc = parse_bc(j["bc"]);
        if (j.contains("window")) {
            cfg.re_min = j["window"][0].get<double>();
            cfg.re_max = j["window"][1].get<double>();
        }
        if (j.contains("strip")) cfg.strip = j["strip"].get<double>();
        if (j.contains("coupling_scale")) cfg.coupling_scale = j["coupling_scale"].get<double>();
        if (j.contains("beam")) cfg.beam = j["beam"];
        if (auto* o = overrides.get_option_no_throw("--strip"); o && o->count())
            cfg.strip = o->as<double>();
        if (auto* o = overrides.get_option_no_throw("--window"); o && o->count()) {
            const std::string w = o->as<std::string>();
            const auto colon = w.find(':');
            if (colon == std::string::npos) throw ConfigError("--window expects RE_MIN:RE_MAX");
            cfg.re_min = std::stod(w.substr(0, colon));
            cfg.re_max = std::stod(w.substr(colon + 1));
        }
        if (!(cfg.re_min < cfg.re_max)) throw ConfigError("empty window");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    out << text;
    if (!out) throw Error("cannot write " + path.string());
}

std::string spectrum_csv(const std::vector<EigenvalueRecord>& records) {
    std::string csv = "n,re,im,multiplicity,re0,im0,gap\n";
    for (const auto& r : records) {
        csv += std::to_string(r.n) + "," + fmt(r.lambda.real()) + "," + fmt(r.lambda.imag()) +
               "," + std::to_string(r.multiplicity) + ",";
        csv += (r.lambda0 ? fmt(r.lambda0->real()) : "") + std::string(",");
        csv += (r.lambda0 ? fmt(r.lambda0->imag()) : "") + std::string(",");
        csv += (r.gap ? fmt(*r.gap) : "");
        csv += "\n";
    }
    return csv;
}

struct SpectrumResult {
    std::vector<EigenvalueRecord> records;
    double strip_h = 0.0;
    bool strip_warning = false;
    std::string mode;
};

/// Shared pipeline: locate the perturbed spectrum and pair it with the
/// unperturbed family over the same window.
SpectrumResult run_spectrum(const RunConfig& cfg) {
    RegularityMinors minors = check_regularity(cfg.bc);
    if (!minors.regular) throw InvalidBoundaryError("boundary conditions are not regular");
    ReducedBC rbc = reduce_bc(cfg.bc).bc;

    auto family = delta0_zero_family(rbc, cfg.weights, cfg.re_min, cfg.re_max);
    SpectrumResult out;
    out.strip_h = cfg.strip ? *cfg.strip : (family ? family->max_abs_imag + 1.0 : 2.0);

    std::vector<EigenvalueRecord> unperturbed;
    if (family) {
        unperturbed = records_from_listing(*family);
    } else {
        auto h0 = DeterminantHandle::closed_form(rbc, cfg.weights);
        unperturbed = find_zeros_strip(h0, Strip(out.strip_h, cfg.re_min, cfg.re_max));
    }

    const bool zero_potential = cfg.potential.l1_norm() == 0.0;
    if (zero_potential) {
        out.mode = "closed-form";
        out.records = unperturbed;
        for (auto& r : out.records) {
            r.lambda0 = r.lambda;
            r.gap = 0.0;
        }
    } else {
        out.mode = "propagator";
        DiracProblem p{cfg.weights, cfg.potential, cfg.bc};
        auto h = DeterminantHandle::via_propagator(p);
        out.records = find_zeros_strip(h, Strip(out.strip_h, cfg.re_min, cfg.re_max));
        pair_with_unperturbed(out.records, unperturbed, cfg.re_min, cfg.re_max);
    }
    for (const auto& r : out.records)
        if (std::abs(r.lambda.imag()) > out.strip_h - 0.1) out.strip_warning = true;
    return out;
}

json verdict_json(const RegularityVerdict& v) {
    json out;
    out["regular"] = v.regular;
    out["strict"] = v.strict == StrictVerdict::yes
                        ? "yes"
                        : (v.strict == StrictVerdict::no ? "no" : "undetermined");
    out["branch"] = v.branch;
    json w = json::object();
    for (const auto& [k, val] : v.witnesses) w[k] = val;
    out["witnesses"] = w;
    if (!v.numerical_hint.empty()) out["numerical_hint"] = v.numerical_hint;
    return out;
}

int cmd_spectrum(const RunConfig& cfg, const fs::path& outdir) {
    SpectrumResult res = run_spectrum(cfg);
    write_text(outdir / "spectrum.csv", spectrum_csv(res.records));

    int total = 0;
    for (const auto& r : res.records) total += r.multiplicity;
    const double expected = (cfg.re_max - cfg.re_min) * cfg.weights.span() / (2.0 * M_PI);
    json summary;
    summary["mode"] = res.mode;
    summary["count"] = total;
    summary["records"] = int(res.records.size());
    summary["strip_h"] = res.strip_h;
    summary["strip_warning"] = res.strip_warning;
    summary["window"] = json::array({cfg.re_min, cfg.re_max});
    summary["density_expected"] = expected;
    summary["density_deviation"] = double(total) - expected;
    write_text(outdir / "summary.json", summary.dump(2) + "\n");
    std::printf("spectrum: %d zeros (%zu records) in [%g, %g], strip h = %g\n", total,
                res.records.size(), cfg.re_min, cfg.re_max, res.strip_h);
    return 0;
}

int cmd_classify(const RunConfig& cfg, const fs::path& outdir) {
    RegularityMinors minors = check_regularity(cfg.bc);
    json out;
    out["regular"] = minors.regular;
    if (!minors.regular) {
        out["strict"] = "no";
        out["branch"] = "non-regular";
        write_text(outdir / "verdict.json", out.dump(2) + "\n");
        std::printf("classify: not regular (J14*J32 = 0)\n");
        return 0;
    }
    ReducedBC rbc = reduce_bc(cfg.bc).bc;
    RegularityVerdict v = classify_strict(rbc, cfg.weights);
    if (v.strict == StrictVerdict::undetermined) {
        auto h0 = DeterminantHandle::closed_form(rbc, cfg.weights);
        auto family = delta0_zero_family(rbc, cfg.weights, 0.0, 1.0);
        const double strip_h = family ? family->max_abs_imag + 1.0 : 3.0;
        SeparationReport sep = numerical_separation(h0, strip_h, 20.0, 2);
        v.numerical_hint = sep.hint;
    }
    out = verdict_json(v);
    write_text(outdir / "verdict.json", out.dump(2) + "\n");
    std::printf("classify: regular=%d strict=%s branch=%s\n", int(v.regular),
                out["strict"].get<std::string>().c_str(), v.branch.c_str());
    return 0;
}

int cmd_kernel(const RunConfig& cfg, const fs::path& outdir, const std::string& dump_path) {
    if (!cfg.potential.off_diagonal())
        throw ConfigError("kernel: potential must be off-diagonal (run gauge reduction first)");
    RegularityMinors minors = check_regularity(cfg.bc);
    if (!minors.regular) throw InvalidBoundaryError("boundary conditions are not regular");
    ReducedBC rbc = reduce_bc(cfg.bc).bc;

    TriangleGrid grid(cfg.grid_n);
    KernelSet ks = build_kernels(cfg.potential, cfg.weights, grid);

    json rep;
    rep["grid_n"] = cfg.grid_n;
    rep["goursat_residual"] = goursat_residual(ks.r, cfg.potential, cfg.weights);
    rep["volterra_residual_plus"] = volterra_residual(ks.r, cfg.weights, ks.pplus);
    rep["volterra_residual_minus"] = volterra_residual(ks.r, cfg.weights, ks.pminus);
    rep["jump_residual_plus"] = jump_residual(ks.kplus, cfg.potential, cfg.weights);
    rep["jump_residual_minus"] = jump_residual(ks.kminus, cfg.potential, cfg.weights);
    rep["edge_residual_plus"] = edge_residual(ks.kplus, cfg.weights, +1);
    rep["edge_residual_minus"] = edge_residual(ks.kminus, cfg.weights, -1);

    auto norms = [&](const KernelField& f) {
        KernelNorms n = kernel_norms(f);
        json out;
        out["x1"] = json::array(
            {json::array({n.x1[0][0], n.x1[0][1]}), json::array({n.x1[1][0], n.x1[1][1]})});
        out["xinf"] = json::array({json::array({n.xinf[0][0], n.xinf[0][1]}),
                                   json::array({n.xinf[1][0], n.xinf[1][1]})});
        out["x1_max"] = n.x1_max;
        out["xinf_max"] = n.xinf_max;
        return out;
    };
    rep["norms_R"] = norms(ks.r);
    rep["norms_K_plus"] = norms(ks.kplus);
    rep["norms_K_minus"] = norms(ks.kminus);

    // kernel-trace determinant vs the propagator at 20 sample points
    {
        auto hk = kernel_determinant(ks, rbc, cfg.weights);
        DiracProblem p{cfg.weights, cfg.potential, cfg.bc};
        const cplx scale_fix = reduce_bc(cfg.bc).scale;
        double derr = 0.0;
        for (int k = 0; k < 20; ++k) {
            cplx lam(cfg.re_min + (cfg.re_max - cfg.re_min) * (k + 0.5) / 20.0,
                     0.3 * ((k % 3) - 1));
            cplx dp = delta_via_propagator(p, lam) * scale_fix;
            derr = std::max(derr, std::abs(hk(lam) - dp) / delta_scale(cfg.weights, lam));
        }
        rep["determinant_vs_propagator"] = derr;
    }

    // transform-vs-propagator error table over two grids
    json table = json::array();
    for (int n : {cfg.grid_n / 2, cfg.grid_n}) {
        const KernelSet* use = &ks;
        std::optional<KernelSet> coarse;
        if (n != cfg.grid_n) {
            coarse.emplace(build_kernels(cfg.potential, cfg.weights, TriangleGrid(n)));
            use = &*coarse;
        }
        for (cplx lam : {cplx(0.0), cplx(3.0), cplx(5.0, 0.5)}) {
            auto et = apply_transform(use->kplus, cfg.weights, lam, +1);
            DiracProblem p{cfg.weights, cfg.potential.resampled(n), cfg.bc};
            auto ep = solve_cauchy_pm(p, lam, +1);
            double err = 0.0;
            for (size_t i = 0; i < et.size(); ++i)
                err = std::max(err, (et[i] - ep[i]).cwiseAbs().maxCoeff());
            json row;
            row["n"] = n;
            row["lambda"] = cplx_json(lam);
            row["transform_vs_propagator"] = err;
            table.push_back(row);
        }
    }
    rep["transform_errors"] = table;
    if (!dump_path.empty()) write_kernel(ks.kplus, cfg.weights, dump_path);
    write_text(outdir / "kernel_report.json", rep.dump(2) + "\n");
    std::printf("kernel: goursat %.3e, edge (%.3e, %.3e), det agreement %.3e\n",
                rep["goursat_residual"].get<double>(), rep["edge_residual_plus"].get<double>(),
                rep["edge_residual_minus"].get<double>(),
                rep["determinant_vs_propagator"].get<double>());
    return 0;
}

int cmd_basis(const RunConfig& cfg, const fs::path& outdir) {
    SpectrumResult res = run_spectrum(cfg);
    DiracProblem p{cfg.weights, cfg.potential, cfg.bc};
    ReducedBC rbc = reduce_bc(cfg.bc).bc;

    std::vector<RootPair> pairs;
    for (const auto& rec : res.records) {
        auto built = eigenpair_functions(p, rbc, rec, cfg.grid_m);
        for (auto& rp : built) pairs.push_back(std::move(rp));
    }
    normalize_biorthogonal(pairs);
    GramReport rep = gram_diagnostics(pairs);

    // parenthesis blocks at eps = quarter of the median record gap
    std::vector<double> gaps;
    for (size_t i = 1; i < res.records.size(); ++i)
        gaps.push_back(std::abs(res.records[i].lambda - res.records[i - 1].lambda));
    std::sort(gaps.begin(), gaps.end());
    const double eps = gaps.empty() ? 0.25 : std::max(1e-6, 0.25 * gaps[gaps.size() / 2]);
    std::vector<EigenvalueRecord> pair_records;
    for (const auto& rp : pairs) pair_records.push_back(EigenvalueRecord{rp.lambda, 1, rp.n});
    auto blocks = group_parentheses(pair_records, eps);
    const double block_cond = block_gram_condition(pairs, blocks);

    json out;
    out["window"] = rep.window;
    out["degenerate"] = rep.degenerate_count;
    out["max_cross_residual"] = rep.max_cross_residual;
    out["gram_cond"] = rep.cond;
    out["gram_cond_half"] = rep.cond_half;
    out["bessel"] = rep.bessel;
    out["bessel_half"] = rep.bessel_half;
    out["block_eps"] = eps;
    out["block_count"] = int(blocks.size());
    out["block_gram_cond"] = block_cond;
    write_text(outdir / "basis_report.json", out.dump(2) + "\n");

    std::string csv = "n,re,im,pairing_re,pairing_im,eq_residual,degenerate\n";
    for (const auto& rp : pairs) {
        csv += std::to_string(rp.n) + "," + fmt(rp.lambda.real()) + "," +
               fmt(rp.lambda.imag()) + "," + fmt(rp.pairing.real()) + "," +
               fmt(rp.pairing.imag()) + "," + fmt(equation_residual(p, rp.lambda, rp.f)) +
               "," + (rp.degenerate ? "1" : "0") + "\n";
    }
    write_text(outdir / "pair_residuals.csv", csv);
    std::printf("basis: %d pairs, cross residual %.3e, cond %.3g (half %.3g), block %.3g\n",
                rep.window, rep.max_cross_residual, rep.cond, rep.cond_half, block_cond);
    return 0;
}

BeamCoefficients parse_beam(const json& j, int grid_m) {
    BeamCoefficients c;
    c.length = j.value("length", 1.0);
    const int m = j.value("grid_m", grid_m);
    auto profile = [&](const char* name, double fallback) {
        if (!j.contains(name)) return std::vector<double>(m + 1, fallback);
        const auto& v = j[name];
        if (v.is_number()) return std::vector<double>(m + 1, v.get<double>());
        std::vector<double> out;
        for (const auto& x : v) out.push_back(x.get<double>());
        if (int(out.size()) != m + 1) throw ConfigError("beam profiles need grid_m + 1 samples");
        return out;
    };
    auto cprofile = [&](const char* name) {
        if (!j.contains(name)) return std::vector<cplx>(m + 1, cplx(0.0));
        const auto& v = j[name];
        if (v.is_number() || (v.is_array() && v.size() == 2 && v[0].is_number()))
            return std::vector<cplx>(m + 1, parse_cplx(v));
        std::vector<cplx> out;
        for (const auto& x : v) out.push_back(parse_cplx(x));
        if (int(out.size()) != m + 1) throw ConfigError("beam damping needs grid_m + 1 samples");
        return out;
    };
    c.rho = profile("rho", 1.0);
    c.irho = profile("irho", 1.0);
    c.shear = profile("shear", 1.0);
    c.flex = profile("flex", 1.0);
    c.p1 = cprofile("p1");
    c.p2 = cprofile("p2");
    c.alpha1 = j.contains("alpha1") ? parse_cplx(j["alpha1"]) : cplx(2.0);
    c.alpha2 = j.contains("alpha2") ? parse_cplx(j["alpha2"]) : cplx(2.0);
    if (j.contains("beta1")) c.beta1 = parse_cplx(j["beta1"]);
    if (j.contains("beta2")) c.beta2 = parse_cplx(j["beta2"]);
    return c;
}

int cmd_timoshenko(const RunConfig& cfg, const fs::path& outdir) {
    if (cfg.beam.is_null()) throw ConfigError("timoshenko: config needs a beam section");
    BeamCoefficients beam = parse_beam(cfg.beam, 64);
    const double nu = validate_nu(beam);
    BeamReduction red = build_reduction(beam);

    json rep;
    rep["nu"] = nu;
    rep["b1"] = red.b1;
    rep["b2"] = red.b2;
    rep["h1_end"] = red.h1_end;
    rep["h2_end"] = red.h2_end;
    rep["B"] = json::array({red.b_diag(0), red.b_diag(1), red.b_diag(2), red.b_diag(3)});
    auto mat4 = [](const Eigen::Matrix4cd& m) {
        json rows = json::array();
        for (int i = 0; i < 4; ++i) {
            json row = json::array();
            for (int j = 0; j < 4; ++j) row.push_back(cplx_json(m(i, j)));
            rows.push_back(row);
        }
        return rows;
    };
    rep["C"] = mat4(red.C);
    rep["D"] = mat4(red.D);
    rep["Q_t0"] = mat4(red.q_nodes.front());
    rep["Q_t1"] = mat4(red.q_nodes.back());

    const double scale = cfg.coupling_scale.value_or(1.0);
    std::string csv = "subsystem,n,re,im,multiplicity,re0,im0,gap\n";
    auto append = [&](const char* sub, const std::vector<EigenvalueRecord>& recs) {
        for (const auto& r : recs) {
            csv += std::string(sub) + "," + std::to_string(r.n) + "," + fmt(r.lambda.real()) +
                   "," + fmt(r.lambda.imag()) + "," + std::to_string(r.multiplicity) + ",";
            csv += (r.lambda0 ? fmt(r.lambda0->real()) : "") + std::string(",");
            csv += (r.lambda0 ? fmt(r.lambda0->imag()) : "") + std::string(",");
            csv += (r.gap ? fmt(*r.gap) : "");
            csv += "\n";
        }
    };

    std::vector<EigenvalueRecord> unperturbed;  // decoupled union for the drift column
    if (red.beta1 == cplx(0.0) && red.beta2 == cplx(0.0)) {
        Decoupled dec = decouple(red);
        rep["coupling_sup"] = dec.coupling_sup;
        for (int which = 1; which <= 2; ++which) {
            const DiracProblem& sub = which == 1 ? dec.sub1 : dec.sub2;
            auto hs = DeterminantHandle::via_propagator(sub);
            auto family = decoupled_closed_form(red, which, cfg.re_min, cfg.re_max);
            double sh = cfg.strip.value_or((family ? family->max_abs_imag : 1.0) + 1.0);
            auto recs = find_zeros_strip(hs, Strip(sh, cfg.re_min, cfg.re_max));
            if (family) {
                auto unp = records_from_listing(*family);
                try {
                    pair_with_unperturbed(recs, unp, cfg.re_min, cfg.re_max);
                } catch (const PairingError&) {
                    // damping can push zeros out of the window: leave unpaired
                }
                for (const auto& u : unp) unperturbed.push_back(u);
            }
            append(which == 1 ? "1" : "2", recs);
        }
    }

    auto coupled = beam_spectrum(red, cfg.re_min, cfg.re_max, scale, cfg.strip);
    if (!unperturbed.empty()) {
        std::sort(unperturbed.begin(), unperturbed.end(), [](const auto& a, const auto& b) {
            return a.lambda.real() != b.lambda.real() ? a.lambda.real() < b.lambda.real()
                                                      : a.lambda.imag() < b.lambda.imag();
        });
        assign_indices(unperturbed);
        try {
            pair_with_unperturbed(coupled, unperturbed, cfg.re_min, cfg.re_max);
        } catch (const PairingError&) {
        }
    }
    append("coupled", coupled);
    double drift = 0.0;
    for (const auto& r : coupled)
        if (r.gap) drift = std::max(drift, *r.gap);
    rep["coupling_scale"] = scale;
    rep["max_drift_vs_decoupled"] = drift;
    write_text(outdir / "reduction.json", rep.dump(2) + "\n");
    write_text(outdir / "modal.csv", csv);
    std::printf("timoshenko: nu=%g, %zu coupled modes, drift %.3e\n", nu, coupled.size(),
                drift);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral analysis of 2x2 Dirac-type boundary value problems"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name

    std::string config_path, out_dir = ".", dump_kernel;
    app.add_option("--config", config_path, "JSON config path")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--grid-m", "x-grid intervals override")->type_name("INT");
    app.add_option("--grid-n", "triangle-grid intervals override")->type_name("INT");
    app.add_option("--window", "real window RE_MIN:RE_MAX override");
    app.add_option("--strip", "strip half-height override")->type_name("H");

    auto* sub_spectrum = app.add_subcommand("spectrum", "locate eigenvalues in a strip window");
    auto* sub_classify = app.add_subcommand("classify", "regularity / strict-regularity verdict");
    auto* sub_kernel = app.add_subcommand("kernel", "transformation-operator diagnostics");
    sub_kernel->add_option("--dump-kernel", dump_kernel, "binary K+ kernel dump path");
    auto* sub_basis = app.add_subcommand("basis", "root-vector and Gram diagnostics");
    auto* sub_timoshenko = app.add_subcommand("timoshenko", "beam reduction and modal spectra");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path, app);
        fs::path outdir(out_dir);
        fs::create_directories(outdir);
        if (sub_spectrum->parsed()) return cmd_spectrum(cfg, outdir);
        if (sub_classify->parsed()) return cmd_classify(cfg, outdir);
        if (sub_kernel->parsed()) return cmd_kernel(cfg, outdir, dump_kernel);
        if (sub_basis->parsed()) return cmd_basis(cfg, outdir);
        if (sub_timoshenko->parsed()) return cmd_timoshenko(cfg, outdir);
        return 1;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const InvalidBoundaryError& e) {
        std::fprintf(stderr, "boundary conditions: %s\n", e.what());
        return 3;
    } catch (const NotReducibleError& e) {
        std::fprintf(stderr, "boundary conditions: %s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
