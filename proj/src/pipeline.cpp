#include "carleman/pipeline.hpp"

#include "carleman/errors.hpp"
#include "carleman/quadrature.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace carleman {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
    if (orders < 0 || orders > 6)
        raise(ErrorCode::MalformedConfig, "orders must lie in [0, 6]");
    if (!(rule_target > 0.0 && rule_target < 1.0))
        raise(ErrorCode::MalformedConfig, "rule_target must lie in (0, 1)");
    if (!(geometric_target > 0.0 && geometric_target < 1.0))
        raise(ErrorCode::MalformedConfig, "geometric_target must lie in (0, 1)");
    if (!(e_cap_fraction > 0.0 && e_cap_fraction < 1.0))
        raise(ErrorCode::MalformedConfig, "e_cap_fraction must lie in (0, 1)");
    if (!(grid_extent > 0.0) || !(grid_step > 0.0) || grid_step > grid_extent)
        raise(ErrorCode::MalformedConfig, "grid needs 0 < step <= extent");
    if (quadrature_nodes < 16)
        raise(ErrorCode::MalformedConfig, "quadrature_nodes must be >= 16");
    if (representation_samples < 1 || schwarz_samples < 1)
        raise(ErrorCode::MalformedConfig, "sample counts must be >= 1");
    if (!(margin_fraction > 0.0))
        raise(ErrorCode::MalformedConfig, "margin_fraction must be positive");
    if (x_min_count < 0)
        raise(ErrorCode::MalformedConfig, "x_min_count must be >= 0");
    if (!(bell_sharpness > 0.0))
        raise(ErrorCode::MalformedConfig, "bell_sharpness must be positive");
    if (family.preset.empty() && family.matrix_file.empty())
        raise(ErrorCode::MalformedConfig, "family needs a preset or a matrix_file");
}

std::vector<double> RunConfig::nested_extents() const {
    return {grid_extent / 2.0, 2.0 * grid_extent / 3.0, grid_extent};
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& value, const std::string& key) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        raise(ErrorCode::MalformedConfig, "key '" + key + "' has a non-numeric value");
    }
    if (used != value.size())
        raise(ErrorCode::MalformedConfig, "trailing characters after the value of '" + key + "'");
    return out;
}

long long parse_int(const std::string& value, const std::string& key) {
    const double d = parse_double(value, key);
    const long long i = static_cast<long long>(d);
    if (static_cast<double>(i) != d)
        raise(ErrorCode::MalformedConfig, "key '" + key + "' needs an integer");
    return i;
}

} // namespace

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::MalformedConfig, "cannot open config file '" + path + "'");

    RunConfig cfg;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                raise(ErrorCode::MalformedConfig,
                      "unterminated section header at line " + std::to_string(line_no));
            section = trim(t.substr(1, t.size() - 2));
            if (section != "family" && section != "schedule" && section != "grid" &&
                section != "verify")
                raise(ErrorCode::MalformedConfig, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            raise(ErrorCode::MalformedConfig, "expected key = value at line " + std::to_string(line_no));
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            raise(ErrorCode::MalformedConfig, "empty key or value at line " + std::to_string(line_no));

        if (section == "family") {
            if (key == "preset") cfg.family.preset = value;
            else if (key == "matrix_file") cfg.family.matrix_file = value;
            else if (key == "N") cfg.family.N = static_cast<int>(parse_int(value, key));
            else if (key == "R") cfg.family.R = static_cast<int>(parse_int(value, key));
            else if (key == "seed") {
                cfg.family.seed = static_cast<std::uint64_t>(parse_int(value, key));
                cfg.seed = cfg.family.seed;
            } else raise(ErrorCode::MalformedConfig, "unknown [family] key '" + key + "'");
        } else if (section == "schedule") {
            if (key == "rule_target") cfg.rule_target = parse_double(value, key);
            else if (key == "geometric_target") cfg.geometric_target = parse_double(value, key);
            else if (key == "orders") cfg.orders = static_cast<int>(parse_int(value, key));
            else if (key == "e_cap_fraction") cfg.e_cap_fraction = parse_double(value, key);
            else if (key == "x_min_count") cfg.x_min_count = static_cast<int>(parse_int(value, key));
            else if (key == "bell_sharpness") cfg.bell_sharpness = parse_double(value, key);
            else if (key == "quadrature_nodes")
                cfg.quadrature_nodes = static_cast<int>(parse_int(value, key));
            else raise(ErrorCode::MalformedConfig, "unknown [schedule] key '" + key + "'");
        } else if (section == "grid") {
            if (key == "extent") cfg.grid_extent = parse_double(value, key);
            else if (key == "step") cfg.grid_step = parse_double(value, key);
            else raise(ErrorCode::MalformedConfig, "unknown [grid] key '" + key + "'");
        } else if (section == "verify") {
            if (key == "representation_samples")
                cfg.representation_samples = static_cast<int>(parse_int(value, key));
            else if (key == "representation_tolerance")
                cfg.representation_tolerance = parse_double(value, key);
            else if (key == "margin_fraction") cfg.margin_fraction = parse_double(value, key);
            else if (key == "schwarz_samples")
                cfg.schwarz_samples = static_cast<int>(parse_int(value, key));
            else raise(ErrorCode::MalformedConfig, "unknown [verify] key '" + key + "'");
        } else {
            raise(ErrorCode::MalformedConfig,
                  "key outside any section at line " + std::to_string(line_no));
        }
    }
    cfg.validate();
    return cfg;
}

AnalysisResult run_analyze(const RunConfig& cfg) {
    cfg.validate();
    AnalysisResult out;
    out.family = load_family(cfg.family);
    out.witness = WitnessSequence::canonical(out.family.N);
    out.witness.validate();
    out.profile = decay_profile(out.family, out.witness);
    const int cap =
        std::min(out.family.N - 1,
                 std::max(1, static_cast<int>(out.family.N * cfg.e_cap_fraction)));
    out.selection = select_e_sequence(out.profile, cfg.rule_target, cap);
    return out;
}

ConstructResult run_construct(const RunConfig& cfg) {
    ConstructResult state;
    state.analysis = run_analyze(cfg);
    const int n = state.analysis.family.N;
    const int ke = state.analysis.selection.count();
    const int perp = n - ke;

    state.mother = std::make_unique<MotherWavelet>(BellFunction(cfg.bell_sharpness),
                                                   cfg.quadrature_nodes, cfg.orders);

    // Shell budget: enough tail children for the longest x_perp order the
    // pairing can need (all e's unselected); the k-th tail child sits at
    // |j| = 2(k log2(1/q) + log2 k).
    const double log2_inv_q = std::log2(1.0 / cfg.geometric_target);
    const int min_h = n;
    const int shells = static_cast<int>(std::ceil(
                           2.0 * (log2_inv_q * min_h + std::log2(static_cast<double>(min_h) + 1.0)))) +
                       2;
    state.enumeration = std::make_unique<Enumeration>(shells);
    state.partition.emplace(
        partition_gh(*state.enumeration, *state.mother, cfg.geometric_target, min_h));

    state.frames = complete_frame(state.analysis.selection, state.analysis.witness);
    state.split = split_family(state.analysis.family, state.frames);
    state.dledger = d_ledger_over_e(state.frames, state.split);

    try {
        state.xsel = select_x_sequence(state.dledger, *state.partition, cfg.orders,
                                       cfg.x_min_count);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ScheduleExhausted) throw;
        state.xsel = XSelection{}; // no certificate possible; pair everything into the h's
    }
    state.x_count_before_trim = state.xsel.count();
    const int feasible = feasible_x_count(state.xsel.count(), ke, perp, *state.partition);
    state.xsel.e_indices.resize(static_cast<std::size_t>(feasible));
    state.frames.set_x(state.xsel.e_indices);

    state.pairing = build_pairing(state.frames, *state.partition);

    const KernelGrid grid = KernelGrid::make(cfg.grid_extent, cfg.grid_step);
    for (int r = 1; r <= state.analysis.family.R; ++r) {
        state.schmidt.push_back(schmidt_decompose(state.split.j(r)));
        const QuarterPowerA qp = quarter_power(state.schmidt.back());
        state.quarter.push_back(qp.A);
        state.schwarz.push_back(
            schwarz_certify(qp, state.split.j(r), cfg.schwarz_samples,
                            cfg.seed + static_cast<std::uint64_t>(r)));
        state.nuclearity.push_back(nuclearity_report(state.schmidt.back()));
        state.kernels.push_back(assemble_kernel(r, state.pairing, state.split,
                                                state.schmidt.back(), state.frames,
                                                *state.partition, *state.mother, grid,
                                                cfg.orders));
    }
    state.chains = hs_summability_report(state.analysis.family, state.frames, state.split,
                                         state.analysis.selection);
    return state;
}

VerificationReport run_verification(const ConstructResult& state, const RunConfig& cfg) {
    VerificationReport report;
    StructuralInputs inputs;
    inputs.mother = state.mother.get();
    inputs.enumeration = state.enumeration.get();
    inputs.profile = &state.analysis.profile;
    inputs.dledger = &state.dledger;
    inputs.chains = &state.chains;
    inputs.split = &state.split;
    for (auto& entry : structural_suite(inputs)) report.add(std::move(entry));

    for (const auto& kernel : state.kernels) {
        report.add(representation_check(kernel, state.split, cfg.representation_samples,
                                        cfg.seed + 101 + static_cast<std::uint64_t>(kernel.r),
                                        cfg.representation_tolerance));
        report.add(smoothness_check(kernel));
        for (auto& entry : vanishing_check(kernel, cfg.margin_fraction, cfg.nested_extents()))
            report.add(std::move(entry));
    }
    report.sort_by_name();
    return report;
}

// ---------------------------------------------------------------------------
// output writing
// ---------------------------------------------------------------------------

namespace {

void ensure_out_dir(const RunConfig& cfg) { fs::create_directories(cfg.out_dir); }

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoFailure, "cannot write '" + path + "'");
    out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json config_echo(const RunConfig& cfg) {
    return json{{"family",
                 {{"preset", cfg.family.preset},
                  {"matrix_file", cfg.family.matrix_file},
                  {"N", cfg.family.N},
                  {"R", cfg.family.R},
                  {"seed", cfg.family.seed}}},
                {"schedule",
                 {{"rule_target", cfg.rule_target},
                  {"geometric_target", cfg.geometric_target},
                  {"orders", cfg.orders},
                  {"e_cap_fraction", cfg.e_cap_fraction},
                  {"x_min_count", cfg.x_min_count},
                  {"bell_sharpness", cfg.bell_sharpness},
                  {"quadrature_nodes", cfg.quadrature_nodes}}},
                {"grid", {{"extent", cfg.grid_extent}, {"step", cfg.grid_step}}},
                {"verify",
                 {{"representation_samples", cfg.representation_samples},
                  {"representation_tolerance", cfg.representation_tolerance},
                  {"margin_fraction", cfg.margin_fraction},
                  {"schwarz_samples", cfg.schwarz_samples}}}};
}

json selection_json(const ESelection& sel) {
    json j;
    j["witness_indices"] = sel.witness_indices;
    j["decay_values"] = sel.decay_values;
    j["M"] = sel.M;
    j["M_ceiling"] = sel.M_ceiling;
    j["rule_target"] = sel.rule_target;
    return j;
}

json chains_json(const SummabilityChains& chains) {
    auto links = [](const std::vector<ChainLink>& list) {
        json arr = json::array();
        for (const auto& l : list)
            arr.push_back({{"label", l.label},
                           {"lhs", l.lhs},
                           {"rhs", l.rhs},
                           {"equality", l.equality},
                           {"holds", l.holds}});
        return arr;
    };
    return json{{"hs_chain", links(chains.hs_chain)},
                {"gamma_chain", links(chains.gamma_chain)},
                {"all_hold", chains.all_hold()}};
}

const char* status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        default: return "skip";
    }
}

} // namespace

void write_analyze_outputs(const AnalysisResult& analysis, const RunConfig& cfg) {
    ensure_out_dir(cfg);
    json j;
    j["config"] = config_echo(cfg);
    j["family"] = {{"source", analysis.family.source},
                   {"N", analysis.family.N},
                   {"R", analysis.family.R},
                   {"pre_norms", analysis.family.pre_norms},
                   {"norms", analysis.family.norms}};
    j["profile"] = analysis.profile.values;
    j["envelope"] = analysis.profile.envelope;
    j["selection"] = selection_json(analysis.selection);
    write_json(out_path(cfg, "analysis.json"), j);
}

void write_construct_outputs(const ConstructResult& state, const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto& part = *state.partition;

    {
        json j;
        j["shell_budget"] = state.enumeration->shell_budget();
        j["enumeration_size"] = state.enumeration->size();
        json h = json::array();
        for (int k = 1; k <= part.h_count(); ++k) {
            const ChildIndex c = part.h_child(k);
            h.push_back({{"n", part.h_enum_indices()[static_cast<std::size_t>(k - 1)]},
                         {"j", c.j},
                         {"k", c.k}});
        }
        j["h_children"] = h;
        j["n_of_k"] = part.n_of_k();
        j["g_count"] = part.g_count();
        json ledgers;
        const SummabilityLedger scale_ledger = part.h_scale_ledger();
        ledgers["h_scale"] = {{"partial_sum", scale_ledger.partial_sum},
                              {"ceiling", scale_ledger.ceiling},
                              {"within", scale_ledger.within_ceiling()}};
        for (int i = 0; i <= cfg.orders; ++i) {
            const SummabilityLedger l = part.schedule_ledger(i);
            ledgers["schedule_order_" + std::to_string(i)] = {
                {"partial_sum", l.partial_sum}, {"ceiling", l.ceiling}, {"within", l.within_ceiling()}};
        }
        j["summability"] = ledgers;
        write_json(out_path(cfg, "schedule.json"), j);
    }

    {
        json j;
        j["e_count"] = state.frames.e_count();
        j["perp_count"] = state.frames.perp_count();
        j["x_of"] = state.frames.x_of;
        j["x_count_before_trim"] = state.x_count_before_trim;
        j["x_scale"] = state.xsel.scale;
        j["gram_deviation"] = state.frames.gram_deviation();
        j["lambda_hs_norm"] = state.split.lambda_hs_norm;
        j["max_reconstruction_error"] = state.split.max_reconstruction_error;
        j["max_rank_form_error"] = state.split.max_rank_form_error;
        json dl = json::array();
        for (const auto& e : state.dledger.entries)
            dl.push_back({{"k", e.e_index},
                          {"j_term", e.j_term},
                          {"jstar_term", e.jstar_term},
                          {"gamma_term", e.gamma_term},
                          {"total", e.total()}});
        j["d_ledger"] = dl;
        j["chains"] = chains_json(state.chains);
        json sr = json::array();
        for (std::size_t r = 0; r < state.schwarz.size(); ++r)
            sr.push_back({{"r", r + 1},
                          {"samples", state.schwarz[r].samples},
                          {"violations", state.schwarz[r].violations},
                          {"min_slack", state.schwarz[r].min_slack}});
        j["schwarz"] = sr;
        json nu = json::array();
        for (std::size_t r = 0; r < state.nuclearity.size(); ++r)
            nu.push_back({{"r", r + 1},
                          {"kept_sum", state.nuclearity[r].kept_sum},
                          {"tail_bound", state.nuclearity[r].tail_bound},
                          {"flagged", state.nuclearity[r].tail_flagged}});
        j["nuclearity"] = nu;
        write_json(out_path(cfg, "decomposition.json"), j);
    }

    json manifest;
    manifest["config"] = config_echo(cfg);
    json files = json::array();
    for (const auto& kernel : state.kernels) {
        const std::string csv_name = "kernel_r" + std::to_string(kernel.r) + ".csv";
        const std::string side_name = "kernel_r" + std::to_string(kernel.r) + ".json";

        // CSV: s, t, Re K, Im K, then Re/Im of each stored derivative field.
        std::FILE* f = std::fopen(out_path(cfg, csv_name).c_str(), "wb");
        if (!f) raise(ErrorCode::IoFailure, "cannot write kernel CSV");
        std::fputs("s,t", f);
        for (const auto& [i, j] : kernel.orders.pairs)
            std::fprintf(f, ",re_d%d%d,im_d%d%d", i, j, i, j);
        std::fputs("\n", f);
        const int count = kernel.grid.count();
        for (int p = 0; p < count; ++p) {
            for (int q = 0; q < count; ++q) {
                std::fprintf(f, "%.17g,%.17g", kernel.grid.points[static_cast<std::size_t>(p)],
                             kernel.grid.points[static_cast<std::size_t>(q)]);
                for (std::size_t idx = 0; idx < kernel.K.data.size(); ++idx) {
                    const std::complex<double> v = kernel.K.data[idx](p, q);
                    std::fprintf(f, ",%.17g,%.17g", v.real(), v.imag());
                }
                std::fputs("\n", f);
            }
        }
        std::fclose(f);

        json side;
        side["r"] = kernel.r;
        side["scale_factor_to_B"] = static_cast<double>(kernel.r);
        side["grid"] = {{"extent", kernel.grid.extent},
                        {"step", kernel.grid.step},
                        {"points", kernel.grid.count()}};
        json pair_list = json::array();
        for (const auto& [i, j] : kernel.orders.pairs) pair_list.push_back({i, j});
        side["derivative_pairs"] = pair_list;
        side["p_terms"] = kernel.p_terms.size();
        side["f_terms"] = kernel.f_terms.size();
        side["p_majorant"] = kernel.p_majorant;
        side["p_tail_estimate"] = kernel.p_tail_estimate;
        side["f_tail_bound"] = kernel.f_tail_bound;
        write_json(out_path(cfg, side_name), side);

        files.push_back({{"r", kernel.r},
                         {"kernel_csv", csv_name},
                         {"sidecar", side_name},
                         {"scale_factor_to_B", static_cast<double>(kernel.r)}});
    }
    manifest["kernels"] = files;
    manifest["schedule"] = "schedule.json";
    manifest["decomposition"] = "decomposition.json";
    write_json(out_path(cfg, "manifest.json"), manifest);
}

void write_verify_outputs(const VerificationReport& report, const RunConfig& cfg) {
    ensure_out_dir(cfg);
    json j;
    j["verdict"] = report.verdict() ? "pass" : "fail";
    j["failures"] = report.failures();
    json entries = json::array();
    // wall-clock runtimes stay out of the file: emitted bytes must be
    // reproducible for identical config and seed
    for (const auto& e : report.entries)
        entries.push_back({{"name", e.name},
                           {"status", status_name(e.status)},
                           {"measured", e.measured},
                           {"tolerance", e.tolerance},
                           {"detail", e.detail}});
    j["checks"] = entries;
    write_json(out_path(cfg, "verification.json"), j);
}

void write_wavelet_outputs(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const MotherWavelet mother(BellFunction(cfg.bell_sharpness), cfg.quadrature_nodes, cfg.orders);

    std::FILE* f = std::fopen(out_path(cfg, "wavelet.csv").c_str(), "wb");
    if (!f) raise(ErrorCode::IoFailure, "cannot write wavelet CSV");
    std::fputs("s,re_u,im_u", f);
    for (int i = 1; i <= cfg.orders; ++i) std::fprintf(f, ",abs_d%d", i);
    std::fputs("\n", f);
    const KernelGrid grid = KernelGrid::make(cfg.grid_extent, cfg.grid_step);
    for (double s : grid.points) {
        const std::complex<double> u = mother.eval(s, 0);
        std::fprintf(f, "%.17g,%.17g,%.17g", s, u.real(), u.imag());
        for (int i = 1; i <= cfg.orders; ++i)
            std::fprintf(f, ",%.17g", std::abs(mother.eval(s, i)));
        std::fputs("\n", f);
    }
    std::fclose(f);

    json j;
    j["config"] = config_echo(cfg);
    json sup = json::array(), bounds = json::array();
    for (int i = 0; i <= cfg.orders; ++i) {
        sup.push_back(mother.sup_norm(i));
        bounds.push_back(mother.order_bound(i));
    }
    j["sup_norms"] = sup;
    j["order_bounds"] = bounds;
    j["scale_bounds_example"] = {{"j=2", MotherWavelet::scale_bound(2)},
                                 {"j=-3", MotherWavelet::scale_bound(-3)}};
    json radii;
    for (double eps : {1e-6, 1e-8, 1e-10})
        radii[std::to_string(eps)] = mother.decay_radius(eps);
    j["decay_radii"] = radii;
    {
        // L2 normalization witness over [-40, 40]
        const double step = 0.01;
        const int n = static_cast<int>(80.0 / step) + 1;
        std::vector<double> vals(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            vals[static_cast<std::size_t>(i)] = std::norm(mother.eval(-40.0 + i * step));
        j["l2_norm_squared"] = quad::trapezoid(vals.data(), vals.size(), step);
    }
    write_json(out_path(cfg, "wavelet.json"), j);
}

} // namespace carleman
