// Command-line front end: instance generation, multi-problem training,
// checkpoint evaluation, zero-shot transfer with fine-tuning, and curve
// merging for external plotting.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trapsnet/domains.hpp"
#include "trapsnet/evalkit.hpp"
#include "trapsnet/instance_io.hpp"
#include "trapsnet/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trapsnet;

namespace {

// exit codes: 0 success, 1 usage, 2 io/parse, 3 runtime
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitRuntime = 3;

struct CliError {
    int code;
    std::string message;
};

Topology default_topology(DomainId domain) {
    switch (domain) {
    case DomainId::SysAdmin: return Topology::RandomGraph;
    case DomainId::GameOfLife: return Topology::Grid;
    case DomainId::AcademicAdvising: return Topology::Dag;
    }
    return Topology::RandomGraph;
}

Topology topology_from_name(const std::string& name) {
    if (name == "random_graph") return Topology::RandomGraph;
    if (name == "grid") return Topology::Grid;
    if (name == "dag") return Topology::Dag;
    throw CliError{kExitUsage, "unknown topology: " + name};
}

/// Fill grid rows/cols when unset: perfect squares only; rectangles require
/// explicit --rows/--cols.
void resolve_grid(GeneratorConfig& config) {
    if (config.topology != Topology::Grid) return;
    if (config.grid_rows == 0 && config.grid_cols == 0) {
        int root = static_cast<int>(std::lround(std::sqrt(config.size)));
        if (root * root != config.size)
            throw InvalidTopology(
                "size " + std::to_string(config.size) +
                " is not a perfect square; pass --rows and --cols explicitly");
        config.grid_rows = config.grid_cols = root;
    } else if (config.grid_rows == 0 || config.grid_cols == 0) {
        throw InvalidTopology("--rows and --cols must be given together");
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{kExitIo, "cannot write " + path};
    return out;
}

// ------------------------------------------------------------------ gen --

int cmd_gen(const std::string& domain_name_arg, int size, std::string topology_name,
            double edge_prob, int rows, int cols, std::uint64_t seed, int horizon,
            double discount, const std::string& out_path) {
    GeneratorConfig config;
    config.domain = domain_from_name(domain_name_arg);
    config.size = size;
    config.topology = topology_name.empty() ? default_topology(config.domain)
                                            : topology_from_name(topology_name);
    config.edge_prob = edge_prob;
    config.grid_rows = rows;
    config.grid_cols = cols;
    config.seed = seed;
    config.horizon = horizon;
    config.discount = discount;
    resolve_grid(config);
    ProblemInstance inst = generate_instance(config);
    save_instance_file(inst, out_path);
    std::cout << "wrote " << out_path << " (" << inst.object_count() << " objects)\n";
    return 0;
}

// ---------------------------------------------------------------- train --

TrainConfig manifest_to_config(const json& m, const fs::path& base_dir) {
    TrainConfig config;
    if (!m.contains("domain"))
        throw CliError{kExitIo, "manifest: missing 'domain'"};
    DomainId domain = domain_from_name(m.at("domain").get<std::string>());

    if (m.contains("train_instances"))
        for (const json& entry : m.at("train_instances")) {
            fs::path p = entry.get<std::string>();
            if (p.is_relative()) p = base_dir / p;
            config.instances.push_back(load_instance_file(p.string()));
        }
    if (m.contains("generate"))
        for (const json& entry : m.at("generate")) {
            GeneratorConfig g;
            g.domain = domain;
            g.topology = default_topology(domain);
            g.size = entry.at("size").get<int>();
            g.seed = entry.value("seed", 0ULL);
            g.edge_prob = entry.value("edge_prob", 0.3);
            g.grid_rows = entry.value("rows", 0);
            g.grid_cols = entry.value("cols", 0);
            g.horizon = entry.value("horizon", 20);
            g.discount = entry.value("discount", 1.0);
            if (entry.contains("topology"))
                g.topology = topology_from_name(entry.at("topology").get<std::string>());
            resolve_grid(g);
            config.instances.push_back(generate_instance(g));
        }
    if (config.instances.empty())
        throw CliError{kExitIo, "manifest: no training instances ('train_instances' or 'generate')"};
    for (const ProblemInstance& inst : config.instances)
        if (inst.domain != domain)
            throw CliError{kExitIo, "manifest: instance " + inst.name +
                                        " does not belong to domain '" +
                                        trapsnet::domain_name(domain) + "'"};

    config.nstep = m.value("nstep", 20);
    config.gamma = m.value("gamma", 0.99);
    config.entropy_weight = m.value("entropy_weight", 0.01);
    config.value_loss_weight = m.value("value_loss_weight", 0.5);
    config.grad_clip_norm = m.value("grad_clip_norm", 40.0);
    config.wall_clock_budget = m.value("wall_clock_budget", 0.0);
    config.checkpoint_interval = m.value("checkpoint_interval", 0.0);
    config.max_rounds = m.value("max_rounds", 0L);
    config.checkpoint_every_rounds = m.value("checkpoint_every_rounds", 0L);
    config.seed = m.value("seed", 0ULL);
    config.shared_encoder = m.value("shared_encoder", false);
    config.normalize_rewards = m.value("normalize_rewards", false);
    std::string encoder = m.value("encoder", std::string("gat"));
    if (encoder == "gat")
        config.encoder = EncoderKind::Gat;
    else if (encoder == "gcn")
        config.encoder = EncoderKind::Gcn;
    else
        throw CliError{kExitIo, "manifest: unknown encoder '" + encoder + "'"};
    if (m.contains("resume_from")) {
        fs::path p = m.at("resume_from").get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        config.resume = load_checkpoint_file(p.string());
    }
    return config;
}

std::string checkpoint_filename(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "checkpoint_%06zu.tpsn", index);
    return buf;
}

void write_log_header(std::ostream& out, std::size_t problems) {
    out << "wall_seconds,round";
    for (std::size_t i = 0; i < problems; ++i) out << ",return_" << i;
    out << ",policy_loss,value_loss,entropy,total_loss,grad_norm\n";
}

void write_log_row(std::ostream& out, const TrainLogRow& row) {
    out << format_csv_number(row.wall_seconds) << "," << row.round;
    for (double r : row.problem_returns) out << "," << format_csv_number(r);
    out << "," << format_csv_number(row.stats.policy_loss) << ","
        << format_csv_number(row.stats.value_loss) << ","
        << format_csv_number(row.stats.entropy) << ","
        << format_csv_number(row.stats.total_loss) << ","
        << format_csv_number(row.stats.grad_norm) << "\n";
}

int cmd_train(const std::string& manifest_path, int threads) {
    std::ifstream in(manifest_path);
    if (!in) throw CliError{kExitIo, "cannot open manifest: " + manifest_path};
    json m;
    try {
        in >> m;
    } catch (const json::exception& e) {
        throw CliError{kExitIo, std::string("manifest is not valid JSON: ") + e.what()};
    }
    fs::path base_dir = fs::path(manifest_path).parent_path();
    TrainConfig config = manifest_to_config(m, base_dir);
    config.threads = threads;

    if (!m.contains("output_dir"))
        throw CliError{kExitIo, "manifest: missing 'output_dir'"};
    fs::path out_dir = m.at("output_dir").get<std::string>();
    if (out_dir.is_relative()) out_dir = base_dir / out_dir;
    fs::create_directories(out_dir);

    std::ofstream log = open_output((out_dir / "train_log.csv").string());
    write_log_header(log, config.instances.size());

    std::size_t emitted = 0;
    Checkpoint final = train(
        config,
        [&](const Checkpoint& cp) {
            save_checkpoint_file(cp, (out_dir / checkpoint_filename(emitted)).string());
            ++emitted;
        },
        [&](const TrainLogRow& row) { write_log_row(log, row); });
    std::cout << "trained " << final.meta.gradient_steps << " rounds; " << emitted
              << " checkpoints in " << out_dir.string() << "\n";
    return 0;
}

// ----------------------------------------------------------------- eval --

int cmd_eval(const std::string& checkpoint_path, const std::string& instance_path,
             int runs, bool baselines, std::uint64_t seed, const std::string& out_path,
             int threads) {
    Checkpoint cp = load_checkpoint_file(checkpoint_path);
    ProblemInstance inst = load_instance_file(instance_path);
    ModelEval model = transfer_init(cp, inst);

    RngStream rng(seed);
    std::vector<EvalReport> reports;
    const ProblemInstance* inst_ptr = &inst;
    const ModelEval* model_ptr = &model;
    PolicyFn greedy = [inst_ptr, model_ptr](const GroundState& s) {
        PolicyDistribution d;
        d.probs.assign(legal_action_count(*inst_ptr), 0.0);
        d.probs[action_index(*inst_ptr, greedy_action(*inst_ptr, model_ptr->policy(s)))] = 1.0;
        return d;
    };
    reports.push_back(estimate_value(inst, greedy, runs, rng.derive(0), "greedy", threads));
    reports.push_back(
        estimate_value(inst, model.policy_fn(), runs, rng.derive(1), "sampled", threads));
    if (baselines) {
        std::uint64_t tag = 2;
        for (BaselineKind kind : {BaselineKind::UniformRandom, BaselineKind::NoopOnly,
                                  domain_greedy_kind(inst.domain)})
            reports.push_back(estimate_value(inst, baseline_policy(inst, kind), runs,
                                             rng.derive(tag++), baseline_name(kind),
                                             threads));
    }

    std::ostringstream csv;
    write_report_csv_header(csv);
    for (const EvalReport& r : reports) write_report_csv_row(csv, r);
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        open_output(out_path) << csv.str();
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

// ------------------------------------------------------------- transfer --

int cmd_transfer(const std::string& checkpoint_path, const std::string& instance_path,
                 double budget_seconds, double eval_every, long budget_rounds,
                 long eval_every_rounds, int runs, std::uint64_t seed,
                 const std::string& out_path, int threads) {
    Checkpoint cp = load_checkpoint_file(checkpoint_path);
    ProblemInstance inst = load_instance_file(instance_path);
    transfer_init(cp, inst);   // validation only; throws on mismatch

    // Fine-tuning time axis starts at zero: the t=0 checkpoint is the pure
    // zero-shot transfer.
    cp.meta.wall_seconds = 0.0;

    TrainConfig config;
    config.instances = {inst};
    config.resume = cp;
    config.seed = seed;
    config.threads = threads;
    config.wall_clock_budget = budget_seconds;
    config.checkpoint_interval = eval_every > 0 ? eval_every : budget_seconds / 5.0;
    config.max_rounds = budget_rounds;
    config.checkpoint_every_rounds = eval_every_rounds;

    std::vector<Checkpoint> checkpoints;
    train(config, [&](const Checkpoint& c) { checkpoints.push_back(c); });

    LearningCurve curve = learning_curve(checkpoints, inst, runs,
                                         RngStream(seed).derive(0xE7A1), threads);
    std::ofstream out = open_output(out_path);
    write_curve_csv(out, curve);
    std::cout << "wrote " << out_path << " (" << curve.points.size()
              << " rows; v_inf=" << format_csv_number(curve.v_inf)
              << " v_sup=" << format_csv_number(curve.v_sup) << ")\n";
    return 0;
}

// ------------------------------------------------------------- plotdata --

int cmd_plotdata(const std::vector<std::string>& curve_paths,
                 const std::string& out_path) {
    std::ostringstream merged;
    merged << "source,t,V,alpha,stderr,policy_id\n";
    for (const std::string& path : curve_paths) {
        std::ifstream in(path);
        if (!in) throw CliError{kExitIo, "cannot open curve file: " + path};
        std::string source = fs::path(path).stem().string();
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            if (line_no == 1) {
                if (line != "t,V,alpha,stderr,policy_id")
                    throw CliError{kExitIo, path + ":1: unexpected curve header"};
                continue;
            }
            int commas = 0;
            for (char c : line)
                if (c == ',') ++commas;
            if (commas != 4)
                throw CliError{kExitIo, path + ":" + std::to_string(line_no) +
                                            ": expected 5 columns"};
            merged << source << "," << line << "\n";
        }
    }
    if (out_path.empty()) {
        std::cout << merged.str();
    } else {
        open_output(out_path) << merged.str();
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"size-independent neural planner for factored RDDL-style domains"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker thread cap")->capture_default_str();

    auto* gen = app.add_subcommand("gen", "generate a random problem instance");
    std::string gen_domain, gen_topology, gen_out;
    int gen_size = 0, gen_rows = 0, gen_cols = 0, gen_horizon = 20;
    double gen_edge_prob = 0.3, gen_discount = 1.0;
    std::uint64_t gen_seed = 0;
    gen->add_option("--domain", gen_domain,
                    "sysadmin | game_of_life | academic_advising")->required();
    gen->add_option("--size", gen_size, "object count")->required();
    gen->add_option("--topology", gen_topology, "random_graph | grid | dag");
    gen->add_option("--edge-prob", gen_edge_prob, "edge probability")->capture_default_str();
    gen->add_option("--rows", gen_rows, "grid rows");
    gen->add_option("--cols", gen_cols, "grid cols");
    gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen->add_option("--horizon", gen_horizon, "episode length")->capture_default_str();
    gen->add_option("--discount", gen_discount, "discount factor")->capture_default_str();
    gen->add_option("--out", gen_out, "output instance file")->required();

    auto* train_cmd = app.add_subcommand("train", "train on a manifest of problems");
    std::string train_manifest;
    train_cmd->add_option("--manifest", train_manifest, "JSON manifest")->required();

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on an instance");
    std::string eval_checkpoint, eval_instance, eval_out;
    int eval_runs = 100;
    bool eval_baselines = false;
    std::uint64_t eval_seed = 0;
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "checkpoint file")->required();
    eval_cmd->add_option("--instance", eval_instance, "instance file")->required();
    eval_cmd->add_option("--runs", eval_runs, "rollouts per estimate")->capture_default_str();
    eval_cmd->add_flag("--baselines", eval_baselines, "include baseline policies");
    eval_cmd->add_option("--seed", eval_seed, "evaluation seed")->capture_default_str();
    eval_cmd->add_option("--out", eval_out, "report CSV (stdout when omitted)");

    auto* transfer_cmd =
        app.add_subcommand("transfer", "zero-shot transfer plus fine-tuning curve");
    std::string tr_checkpoint, tr_instance, tr_out;
    double tr_budget = 0.0, tr_eval_every = 0.0;
    long tr_budget_rounds = 0, tr_eval_every_rounds = 0;
    int tr_runs = 100;
    std::uint64_t tr_seed = 0;
    transfer_cmd->add_option("--checkpoint", tr_checkpoint, "source checkpoint")->required();
    transfer_cmd->add_option("--instance", tr_instance, "target instance")->required();
    transfer_cmd->add_option("--budget", tr_budget, "fine-tuning seconds (0 = zero-shot only)")
        ->capture_default_str();
    transfer_cmd->add_option("--eval-every", tr_eval_every,
                             "checkpoint interval in seconds (default budget/5)");
    transfer_cmd->add_option("--budget-rounds", tr_budget_rounds,
                             "deterministic alternative: fine-tune this many rounds");
    transfer_cmd->add_option("--eval-every-rounds", tr_eval_every_rounds,
                             "checkpoint every this many rounds");
    transfer_cmd->add_option("--runs", tr_runs, "rollouts per estimate")->capture_default_str();
    transfer_cmd->add_option("--seed", tr_seed, "fine-tuning/eval seed")->capture_default_str();
    transfer_cmd->add_option("--out", tr_out, "curve CSV")->required();

    auto* plot_cmd = app.add_subcommand("plotdata", "merge curve CSVs for plotting");
    std::vector<std::string> plot_curves;
    std::string plot_out;
    plot_cmd->add_option("--curves", plot_curves, "input curve CSVs")->expected(-1);
    plot_cmd->add_option("--out", plot_out, "merged CSV (stdout when omitted)");

    try {
        app.parse(argc, argv);
        if (*gen)
            return cmd_gen(gen_domain, gen_size, gen_topology, gen_edge_prob, gen_rows,
                           gen_cols, gen_seed, gen_horizon, gen_discount, gen_out);
        if (*train_cmd) return cmd_train(train_manifest, threads);
        if (*eval_cmd)
            return cmd_eval(eval_checkpoint, eval_instance, eval_runs, eval_baselines,
                            eval_seed, eval_out, threads);
        if (*transfer_cmd)
            return cmd_transfer(tr_checkpoint, tr_instance, tr_budget, tr_eval_every,
                                tr_budget_rounds, tr_eval_every_rounds, tr_runs,
                                tr_seed, tr_out, threads);
        if (*plot_cmd) return cmd_plotdata(plot_curves, plot_out);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const InvalidTopology& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const SemanticError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const CorruptChecksum& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const VersionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
