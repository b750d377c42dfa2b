// diimap command-line tool: change extraction, impact-index aggregation,
// evaluation and synthetic-scenario generation over pre/post feature masks.
//
// Exit codes: 0 success, 1 domain error (e.g. an empty reference mask),
// 2 usage or input error. Every command writes a manifest.json recording the
// resolved parameters and where each came from (default, config file or
// flag); manifests carry no timestamps so identical runs are byte-identical.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "diimap/change.hpp"
#include "diimap/config.hpp"
#include "diimap/error.hpp"
#include "diimap/impact.hpp"
#include "diimap/metrics.hpp"
#include "diimap/raster.hpp"
#include "diimap/report.hpp"
#include "diimap/synth.hpp"
#include "diimap/version.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace diimap;

namespace {

template <typename T>
struct Param {
    T value;
    std::string source = "default";
};

// Shared parameters after default < config file < flag resolution. Threads
// are deliberately not part of the set: they never change any output byte,
// so they do not belong in a reproduction manifest.
struct Options {
    Param<int> dilation_radius{5};
    Param<std::string> dilate_target{"pre"};
    Param<std::int64_t> min_component{1000};
    Param<int> connectivity{8};
    Param<int> grid_size{256};
    Param<double> tau{0.01};
    Param<std::string> truth_rule{"dii-threshold"};
    int threads = 1;
    std::string config_path;
    fs::path out_dir = ".";
};

// Raw flag storage for one subcommand; option pointers tell us which flags
// were actually passed.
struct FlagSet {
    int dilation_radius = 5;
    std::string dilate_target = "pre";
    std::int64_t min_component = 1000;
    int connectivity = 8;
    int grid_size = 256;
    double tau = 0.01;
    std::string truth_rule = "dii-threshold";
    int threads = 1;
    std::string config_path;
    std::string out_dir = ".";

    CLI::Option* o_radius = nullptr;
    CLI::Option* o_target = nullptr;
    CLI::Option* o_min = nullptr;
    CLI::Option* o_conn = nullptr;
    CLI::Option* o_grid = nullptr;
    CLI::Option* o_tau = nullptr;
    CLI::Option* o_rule = nullptr;
    CLI::Option* o_threads = nullptr;
    CLI::Option* o_config = nullptr;
    CLI::Option* o_out = nullptr;
};

void add_common_flags(CLI::App* cmd, FlagSet& f, bool with_config = true) {
    {
        f.o_radius = cmd->add_option("--dilation-radius", f.dilation_radius,
                                     "Disk radius for pre-difference dilation (default 5)");
        f.o_target = cmd->add_option("--dilate-target", f.dilate_target,
                                     "Which mask to dilate: pre, post or none (default pre)")
                         ->check(CLI::IsMember({"pre", "post", "none"}));
        f.o_min = cmd->add_option("--min-component", f.min_component,
                                  "Drop change components smaller than this (default 1000)");
        f.o_conn = cmd->add_option("--connectivity", f.connectivity,
                                   "Component connectivity: 4 or 8 (default 8)")
                       ->check(CLI::IsMember({4, 8}));
    }
    f.o_grid = cmd->add_option("--grid-size", f.grid_size,
                               "Grid cell edge length in pixels (default 256)");
    f.o_tau = cmd->add_option("--tau", f.tau, "DII impact threshold (default 0.01)");
    f.o_rule = cmd->add_option("--truth-rule", f.truth_rule,
                               "Gridding rule for truth labels: dii-threshold or any-pixel")
                   ->check(CLI::IsMember({"dii-threshold", "any-pixel"}));
    f.o_threads = cmd->add_option("--threads", f.threads,
                                  "Worker threads for the parallel stages (default 1)")
                      ->check(CLI::PositiveNumber);
    if (with_config) {
        f.o_config = cmd->add_option("--config", f.config_path,
                                     "TOML config file; flags override file values");
    }
    f.o_out = cmd->add_option("--out", f.out_dir, "Output directory (default .)");
}

// default < config file < flag. Enum-like strings are validated during
// resolution so a bad config value fails with exit 2 before any work runs.
Options resolve_options(const FlagSet& f, const TomlTable* config) {
    Options o;
    if (config) {
        const auto from_config = [&](auto& param, const auto& value) {
            param.value = value;
            param.source = "config";
        };
        if (auto v = config->opt_int("dilation_radius")) from_config(o.dilation_radius, int(*v));
        if (auto v = config->opt_string("dilate_target")) from_config(o.dilate_target, *v);
        if (auto v = config->opt_int("min_component")) from_config(o.min_component, *v);
        if (auto v = config->opt_int("connectivity")) from_config(o.connectivity, int(*v));
        if (auto v = config->opt_int("grid_size")) from_config(o.grid_size, int(*v));
        if (auto v = config->opt_real("tau")) from_config(o.tau, *v);
        if (auto v = config->opt_string("truth_rule")) from_config(o.truth_rule, *v);
        if (auto v = config->opt_int("threads")) o.threads = static_cast<int>(*v);
    }
    const auto from_flag = [](auto& param, const auto& value, const CLI::Option* opt) {
        if (opt && opt->count() > 0) {
            param.value = value;
            param.source = "flag";
        }
    };
    from_flag(o.dilation_radius, f.dilation_radius, f.o_radius);
    from_flag(o.dilate_target, f.dilate_target, f.o_target);
    from_flag(o.min_component, f.min_component, f.o_min);
    from_flag(o.connectivity, f.connectivity, f.o_conn);
    from_flag(o.grid_size, f.grid_size, f.o_grid);
    from_flag(o.tau, f.tau, f.o_tau);
    from_flag(o.truth_rule, f.truth_rule, f.o_rule);
    if (f.o_threads && f.o_threads->count() > 0) o.threads = f.threads;
    if (o.threads < 1) throw ConfigError("threads must be >= 1");
    o.config_path = f.config_path;
    o.out_dir = f.out_dir;

    dilate_target_from_string(o.dilate_target.value);
    truth_rule_from_string(o.truth_rule.value);
    if (o.min_component.value < 0) throw ConfigError("min_component must be >= 0");
    return o;
}

Options make_options(const FlagSet& f) {
    if (!f.config_path.empty()) {
        TomlTable table = parse_toml_file(f.config_path);
        return resolve_options(f, &table);
    }
    return resolve_options(f, nullptr);
}

PipelineConfig pipeline_config(const Options& o) {
    PipelineConfig pc;
    pc.dilation_radius = o.dilation_radius.value;
    pc.dilate_target = dilate_target_from_string(o.dilate_target.value);
    pc.min_component = static_cast<std::uint32_t>(o.min_component.value);
    pc.connectivity = o.connectivity.value;
    pc.validate();
    return pc;
}

ordered_json param_entry(const ordered_json& value, const std::string& source) {
    return ordered_json{{"value", value}, {"source", source}};
}

ordered_json params_json(const Options& o) {
    return ordered_json{
        {"dilation_radius", param_entry(o.dilation_radius.value, o.dilation_radius.source)},
        {"dilate_target", param_entry(o.dilate_target.value, o.dilate_target.source)},
        {"min_component", param_entry(o.min_component.value, o.min_component.source)},
        {"connectivity", param_entry(o.connectivity.value, o.connectivity.source)},
        {"grid_size", param_entry(o.grid_size.value, o.grid_size.source)},
        {"tau", param_entry(o.tau.value, o.tau.source)},
        {"truth_rule", param_entry(o.truth_rule.value, o.truth_rule.source)},
    };
}

void write_json(const fs::path& path, const ordered_json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file " + path.string());
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("failed writing " + path.string());
}

void write_manifest(const Options& o, const std::string& command, const ordered_json& inputs,
                    const std::vector<std::string>& outputs,
                    const ordered_json& extra = ordered_json()) {
    ordered_json m{
        {"tool", std::string(kToolName)},
        {"version", std::string(kVersion)},
        {"command", command},
        {"inputs", inputs},
        {"config_file",
         o.config_path.empty() ? ordered_json(nullptr) : ordered_json(o.config_path)},
        {"parameters", params_json(o)},
        {"output_dir", o.out_dir.string()},
        {"outputs", outputs},
    };
    if (!extra.is_null()) {
        for (auto& [key, value] : extra.items()) m[key] = value;
    }
    write_json(o.out_dir / "manifest.json", m);
}

ordered_json report_json(const EvalReport& r) {
    return ordered_json{{"setting", r.setting}, {"precision", r.precision},
                        {"recall", r.recall},   {"f1", r.f1},
                        {"iou", r.iou},         {"tp", r.counts.tp},
                        {"fp", r.counts.fp},    {"fn", r.counts.fn},
                        {"tn", r.counts.tn}};
}

std::optional<WorldTransform> find_world(const fs::path& primary, const fs::path& secondary) {
    if (auto w = world_file_for(primary)) return w;
    return world_file_for(secondary);
}

int cmd_change(const std::string& before_path, const std::string& after_path, const Options& o) {
    BinaryMask before = load_mask(before_path);
    BinaryMask after = load_mask(after_path);
    RasterPair pair = diimap::make_pair(std::move(before), std::move(after));
    const PipelineConfig pc = pipeline_config(o);
    const ChangeResult result = compute_change_mask(pair, pc, o.threads);

    fs::create_directories(o.out_dir);
    const fs::path mask_path = o.out_dir / "change.pgm";
    save_mask(result.mask, mask_path);
    write_manifest(o, "change", {{"before", before_path}, {"after", after_path}},
                   {"change.pgm", "manifest.json"});
    std::cout << "change pixels: " << result.mask.count_true() << "\n"
              << "wrote " << mask_path.string() << "\n";
    return 0;
}

int cmd_dii(const std::string& change_path, const std::string& before_path, const Options& o) {
    const BinaryMask change = load_mask(change_path);
    const BinaryMask before = load_mask(before_path);
    const GridSpec spec = make_grid(change.width(), change.height(), o.grid_size.value);
    const DiiGrid grid = compute_dii(change, before, spec, o.threads);
    const ImpactMap impact = threshold_dii(grid, o.tau.value);

    fs::create_directories(o.out_dir);
    write_dii_csv(o.out_dir / "dii.csv", grid, impact);
    const auto world = find_world(change_path, before_path);
    write_impact_geojson(o.out_dir / "impact.geojson", impact, &grid, world);
    write_manifest(o, "dii", {{"change", change_path}, {"before", before_path}},
                   {"dii.csv", "impact.geojson", "manifest.json"},
                   {{"world_file", world.has_value()}});
    std::cout << "impacted cells: " << impact.impacted_count() << " of " << spec.cell_count()
              << "\n"
              << "wrote " << (o.out_dir / "dii.csv").string() << ", "
              << (o.out_dir / "impact.geojson").string() << "\n";
    return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path, const std::string& mode,
             const Options& o) {
    EvalReport report;
    if (mode == "pixel") {
        const BinaryMask pred = load_mask(pred_path);
        const BinaryMask truth = load_mask(truth_path);
        report = eval_pixelwise(pred, truth, o.threads);
    } else {
        const ImpactMap pred = read_grid_csv(pred_path);
        const ImpactMap truth = read_grid_csv(truth_path);
        report = eval_gridded(pred, truth);
    }
    fs::create_directories(o.out_dir);
    write_metrics_csv(o.out_dir / "metrics.csv", {report});
    write_manifest(o, "eval", {{"pred", pred_path}, {"truth", truth_path}, {"mode", mode}},
                   {"metrics.csv", "manifest.json"});
    std::cout << metrics_csv({report});
    return 0;
}

int cmd_synth(const std::string& config_path, const FlagSet& flags) {
    TomlTable table = parse_toml_file(config_path);
    Options o = resolve_options(flags, &table);
    o.config_path = config_path;

    ScenarioConfig cfg = scenario_config_from_toml(table);
    cfg.cell_size = o.grid_size.value;
    cfg.tau = o.tau.value;
    cfg.truth_rule = truth_rule_from_string(o.truth_rule.value);
    const Scenario scenario = generate_scenario(cfg);

    fs::create_directories(o.out_dir);
    save_mask(scenario.before, o.out_dir / "before.pgm");
    save_mask(scenario.after, o.out_dir / "after.pgm");
    save_mask(scenario.truth_change, o.out_dir / "truth_change.pgm");
    write_impact_csv(o.out_dir / "truth_impact.csv", scenario.truth_impact);

    const auto src = [&](const char* key) {
        return table.contains(std::string("synth.") + key) ? "config" : "default";
    };
    ordered_json cells = ordered_json::array();
    for (const auto& [r, c] : cfg.footprint_cells) cells.push_back({r, c});
    const ordered_json scenario_json{
        {"width", param_entry(cfg.width, src("width"))},
        {"height", param_entry(cfg.height, src("height"))},
        {"feature_kind",
         param_entry(std::string(to_string(cfg.feature_kind)), src("feature_kind"))},
        {"feature_density", param_entry(cfg.feature_density, src("feature_density"))},
        {"road_width", param_entry(cfg.road_width, src("road_width"))},
        {"building_min", param_entry(cfg.building_min, src("building_min"))},
        {"building_max", param_entry(cfg.building_max, src("building_max"))},
        {"footprint_cells", param_entry(cells, src("footprint_cells"))},
        {"removal_prob", param_entry(cfg.removal_prob, src("removal_prob"))},
        {"speckle_rate", param_entry(cfg.speckle_rate, src("speckle_rate"))},
        {"jitter", param_entry({cfg.jitter_dx, cfg.jitter_dy}, src("jitter"))},
        {"seed", param_entry(cfg.seed, src("seed"))},
    };
    write_manifest(o, "synth", {{"config", config_path}},
                   {"before.pgm", "after.pgm", "truth_change.pgm", "truth_impact.csv",
                    "manifest.json"},
                   {{"scenario", scenario_json}});
    std::cout << "scenario " << cfg.width << "x" << cfg.height << " ("
              << to_string(cfg.feature_kind) << "): before " << scenario.before.count_true()
              << " px, truth change " << scenario.truth_change.count_true() << " px, impacted "
              << scenario.truth_impact.impacted_count() << " cells\n"
              << "wrote " << o.out_dir.string() << "\n";
    return 0;
}

int cmd_run(const std::string& before_path, const std::string& after_path,
            const std::string& truth_path, const Options& o) {
    BinaryMask before = load_mask(before_path);
    BinaryMask after = load_mask(after_path);
    RasterPair pair = diimap::make_pair(std::move(before), std::move(after));
    const PipelineConfig pc = pipeline_config(o);
    const ChangeResult result = compute_change_mask(pair, pc, o.threads);

    fs::create_directories(o.out_dir);
    save_mask(result.mask, o.out_dir / "change.pgm");

    const GridSpec spec = make_grid(result.mask.width(), result.mask.height(), o.grid_size.value);
    const DiiGrid grid = compute_dii(result.mask, pair.before, spec, o.threads);
    const ImpactMap impact = threshold_dii(grid, o.tau.value);
    write_dii_csv(o.out_dir / "dii.csv", grid, impact);
    const auto world = find_world(before_path, after_path);
    write_impact_geojson(o.out_dir / "impact.geojson", impact, &grid, world);

    ordered_json summary{
        {"change_pixels", result.mask.count_true()},
        {"cells", spec.cell_count()},
        {"impacted_cells", impact.impacted_count()},
    };
    std::vector<std::string> outputs{"change.pgm", "dii.csv", "impact.geojson"};

    bool evaluated = false;
    if (truth_path.empty()) {
        std::cerr << "diimap: warning: no truth mask given; evaluation skipped\n";
    } else if (!fs::exists(truth_path)) {
        std::cerr << "diimap: warning: truth mask " << truth_path
                  << " not found; evaluation skipped\n";
    } else {
        const BinaryMask truth = load_mask(truth_path);
        const EvalReport pixel = eval_pixelwise(result.mask, truth, o.threads);
        // The truth labels are gridded against the same before mask so both
        // impact maps share one DII denominator.
        const ImpactMap truth_impact =
            grid_truth(truth, pair.before, spec, truth_rule_from_string(o.truth_rule.value),
                       o.tau.value, o.threads);
        const EvalReport gridded = eval_gridded(impact, truth_impact);
        write_metrics_csv(o.out_dir / "metrics.csv", {pixel, gridded});
        summary["metrics"] = ordered_json{{"pixel", report_json(pixel)},
                                          {"grid", report_json(gridded)}};
        outputs.push_back("metrics.csv");
        std::cout << metrics_csv({pixel, gridded});
        evaluated = true;
    }
    write_json(o.out_dir / "summary.json", summary);
    outputs.push_back("summary.json");
    outputs.push_back("manifest.json");

    ordered_json inputs{{"before", before_path}, {"after", after_path}};
    inputs["truth"] = truth_path.empty() ? ordered_json(nullptr) : ordered_json(truth_path);
    write_manifest(o, "run", inputs, outputs,
                   {{"world_file", world.has_value()}, {"evaluated", evaluated}});
    std::cout << "impacted cells: " << impact.impacted_count() << " of " << spec.cell_count()
              << "\n"
              << "wrote " << o.out_dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"disaster impact mapping from pre/post-disaster feature masks"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string before_path, after_path, change_path, pred_path, truth_path, config_path;
    std::string mode = "pixel";
    std::string run_truth;

    CLI::App* change = app.add_subcommand("change", "Extract the denoised change mask");
    FlagSet change_flags;
    change->add_option("before", before_path, "Pre-disaster mask (PGM/PNG)")->required();
    change->add_option("after", after_path, "Post-disaster mask (PGM/PNG)")->required();
    add_common_flags(change, change_flags);

    CLI::App* dii = app.add_subcommand("dii", "Aggregate a change mask into the impact grid");
    FlagSet dii_flags;
    dii->add_option("change", change_path, "Change mask (PGM/PNG)")->required();
    dii->add_option("before", before_path, "Pre-disaster mask (PGM/PNG)")->required();
    add_common_flags(dii, dii_flags);

    CLI::App* eval = app.add_subcommand("eval", "Score a prediction against truth labels");
    FlagSet eval_flags;
    eval->add_option("pred", pred_path, "Predicted mask (pixel mode) or grid CSV (grid mode)")
        ->required();
    eval->add_option("truth", truth_path, "Truth mask or grid CSV")->required();
    eval->add_option("--mode", mode, "pixel or grid (default pixel)")
        ->check(CLI::IsMember({"pixel", "grid"}));
    add_common_flags(eval, eval_flags);

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic scenario with truth");
    FlagSet synth_flags;
    synth->add_option("config", config_path, "TOML config with a [synth] section")->required();
    add_common_flags(synth, synth_flags, /*with_config=*/false);

    CLI::App* run = app.add_subcommand("run", "Full pipeline: change, dii and optional eval");
    FlagSet run_flags;
    run->add_option("before", before_path, "Pre-disaster mask (PGM/PNG)")->required();
    run->add_option("after", after_path, "Post-disaster mask (PGM/PNG)")->required();
    run->add_option("--truth", run_truth, "Truth change mask; evaluation is skipped if absent");
    add_common_flags(run, run_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*change) return cmd_change(before_path, after_path, make_options(change_flags));
        if (*dii) return cmd_dii(change_path, before_path, make_options(dii_flags));
        if (*eval) return cmd_eval(pred_path, truth_path, mode, make_options(eval_flags));
        if (*synth) return cmd_synth(config_path, synth_flags);
        if (*run) return cmd_run(before_path, after_path, run_truth, make_options(run_flags));
    } catch (const InputError& e) {
        std::cerr << "diimap: error: " << e.what() << "\n";
        return 2;
    } catch (const EmptyReference& e) {
        std::cerr << "diimap: EmptyReference: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "diimap: error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "diimap: internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
