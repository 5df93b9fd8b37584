#include "switchcast/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "switchcast/baselines.hpp"
#include "switchcast/corpus.hpp"
#include "switchcast/csvio.hpp"
#include "switchcast/experiments.hpp"
#include "switchcast/logspace.hpp"
#include "switchcast/oracle.hpp"
#include "switchcast/predictors.hpp"
#include "switchcast/prior.hpp"
#include "switchcast/rng.hpp"
#include "switchcast/switch_engine.hpp"

namespace switchcast {

namespace {

const std::vector<std::string> kSubcommands = {"catchup", "histsim", "consistency", "switch",
                                               "selftest"};

const std::vector<std::string> kSubcommandHelp = {
    "per-symbol code lengths of Markov mixtures over a text corpus",
    "histogram-density redundancy against sampled continuous sources",
    "posterior concentration on the data-generating Bernoulli order",
    "switch-averaged code lengths over a text corpus, with invariant checks",
    "check the engine against a path-enumeration reference and the mixture bound",
};

std::vector<int> parse_orders(const std::string& text) {
    std::vector<int> orders;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) orders.push_back(std::stoi(item));
    std::sort(orders.begin(), orders.end());
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    return orders;
}

std::string orders_to_string(const std::vector<int>& orders) {
    std::string s;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(orders[i]);
    }
    return s;
}

// Flat JSON config keys are flag names; each becomes a synthetic
// "--key=value" token placed before the real command line, so explicit
// flags win by ordinary take-last semantics.
std::vector<std::string> config_file_tokens(const std::filesystem::path& path) {
    nlohmann::json doc = nlohmann::json::parse(read_file(path));
    // a run manifest carries its settings under "config"; accept it directly
    // so a run can be reproduced by pointing --config at the manifest
    if (doc.is_object() && doc.contains("config") && doc["config"].is_object())
        doc = doc["config"];
    if (!doc.is_object()) throw std::invalid_argument("config file must hold a flat JSON object");
    std::vector<std::string> tokens;
    for (const auto& [key, value] : doc.items()) {
        if (key == "config" || key == "subcommand") continue;
        std::string text;
        if (value.is_string())
            text = value.get<std::string>();
        else if (value.is_boolean())
            text = value.get<bool>() ? "true" : "false";
        else if (value.is_number_unsigned())
            text = std::to_string(value.get<std::uint64_t>());
        else if (value.is_number_integer())
            text = std::to_string(value.get<std::int64_t>());
        else if (value.is_number_float())
            text = fmt_double(value.get<double>());
        else
            throw std::invalid_argument("config key '" + key + "' has an unsupported value type");
        tokens.push_back("--" + key + "=" + text);
    }
    return tokens;
}

SwitchPriorConfig build_prior(const RunConfig& cfg, int k_max) {
    SwitchPriorConfig prior;
    prior.theta = cfg.theta;
    if (cfg.prior_k == "harmonic")
        prior.model_prior = ModelPrior::harmonic_pair(k_max);
    else if (cfg.prior_k == "uniform")
        prior.model_prior = ModelPrior::uniform(k_max);
    else
        throw std::invalid_argument("prior-k must be 'harmonic' or 'uniform'");
    if (cfg.prior_t == "harmonic")
        prior.switch_time_prior = TimePrior::harmonic_pair();
    else if (cfg.prior_t.rfind("geometric:", 0) == 0)
        prior.switch_time_prior = TimePrior::geometric(std::stod(cfg.prior_t.substr(10)));
    else
        throw std::invalid_argument("prior-t must be 'harmonic' or 'geometric:<rho>'");
    prior.kset_schedule = KsetSchedule::constant(k_max);
    return prior;
}

std::string csv_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / (name + ".csv")).string();
}

std::string manifest_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / (name + "_manifest.json")).string();
}

void report_invariants(const RunInvariants& inv, bool conservation_tracked) {
    auto line = [](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << detail << ")\n";
    };
    line("mixture-bound band", inv.hedge_vs_best_margin_bits >= -1e-6 &&
                                   inv.hedge_vs_all_margin_bits >= -1e-6 &&
                                   inv.hedge_vs_bma_margin_bits >= -1e-6,
         "worst margin " + fmt_double(std::min({inv.hedge_vs_best_margin_bits,
                                                inv.hedge_vs_all_margin_bits,
                                                inv.hedge_vs_bma_margin_bits})) +
             " bits");
    line("posterior normalization", inv.max_posterior_sum_err <= 1e-9,
         "worst |sum-1| " + fmt_double(inv.max_posterior_sum_err));
    if (conservation_tracked)
        line("share-step mass conservation", inv.max_conservation_rel_err <= 1e-12,
             "worst relative error " + fmt_double(inv.max_conservation_rel_err));
}

int run_catchup_like(const RunConfig& cfg, bool print_invariants) {
    std::vector<std::uint8_t> bytes = read_corpus_bytes(cfg.input);
    CatchupConfig cc;
    cc.theta = cfg.theta;
    cc.stride = cfg.stride;
    cc.track_conservation = print_invariants;
    CatchupResult res = run_catchup(bytes, cfg.orders, cc);

    CsvWriter csv;
    std::vector<std::string> cols = {"n"};
    for (int r : cfg.orders) cols.push_back("codelen_bits_k" + std::to_string(r));
    cols.push_back("codelen_bits_bma");
    cols.push_back("codelen_bits_sw");
    for (int r : cfg.orders) cols.push_back("post_k" + std::to_string(r));
    cols.push_back("selected");
    csv.header(cols);
    for (const CatchupRow& row : res.rows) {
        csv.field(row.n);
        for (double v : row.codelen_bits) csv.field(v);
        csv.field(row.bma_bits);
        csv.field(row.sw_bits);
        for (double v : row.posterior) csv.field(v);
        csv.field(row.selected_order);
        csv.end_row();
    }
    std::string name = cfg.subcommand;
    write_file_atomic(csv_path(cfg, name), csv.buffer);
    write_manifest(manifest_path(cfg, name), cfg.echo(), cfg.seed, {csv_path(cfg, name)},
                   hash_hex(fnv1a64_file(cfg.input)));
    if (print_invariants) report_invariants(res.invariants, true);
    if (!res.invariants.clean()) {
        std::cerr << "experiments: invariant violation on emitted rows\n";
        return 1;
    }
    return 0;
}

int run_histsim_cmd(const RunConfig& cfg) {
    SourceDensity density = parse_density(cfg.density);
    HistsimConfig hc;
    hc.theta = cfg.theta;
    hc.k_max = cfg.kmax;
    hc.workers = cfg.workers;
    HistsimResult res = run_histsim(density, cfg.n, cfg.replicates, hc, cfg.seed);

    CsvWriter csv;
    csv.header({"n", "estimator", "redundancy_bits_mean", "redundancy_bits_se", "replicates"});
    for (std::size_t gi = 0; gi < res.grid.size(); ++gi)
        for (const RiskCurve& curve : res.curves) {
            csv.field(res.grid[gi]);
            csv.field(curve.estimator);
            csv.field(curve.mean_bits[gi]);
            csv.field(curve.se_bits[gi]);
            csv.field(curve.replicates);
            csv.end_row();
        }
    write_file_atomic(csv_path(cfg, "histsim"), csv.buffer);
    write_manifest(manifest_path(cfg, "histsim"), cfg.echo(), cfg.seed, {csv_path(cfg, "histsim")},
                   "");
    if (!res.invariants.clean()) {
        std::cerr << "experiments: invariant violation on emitted rows\n";
        return 1;
    }
    return 0;
}

int run_consistency_cmd(const RunConfig& cfg) {
    ConsistencyConfig cc;
    cc.theta = cfg.theta;
    cc.orders = cfg.orders;
    cc.workers = cfg.workers;
    ConsistencyResult res = run_consistency(BinarySourceSpec::bernoulli(cfg.theta_star), cfg.n,
                                            cfg.replicates, cc, cfg.seed);

    CsvWriter csv;
    std::vector<std::string> cols = {"seed", "n"};
    for (int r : cfg.orders) cols.push_back("post_k" + std::to_string(r));
    cols.push_back("selected");
    csv.header(cols);
    for (const ConsistencyRow& row : res.rows) {
        csv.field(row.seed_index);
        csv.field(row.n);
        for (double v : row.posterior) csv.field(v);
        csv.field(row.selected_order);
        csv.end_row();
    }
    write_file_atomic(csv_path(cfg, "consistency"), csv.buffer);
    write_manifest(manifest_path(cfg, "consistency"), cfg.echo(), cfg.seed,
                   {csv_path(cfg, "consistency")}, "");
    if (!res.invariants.clean()) {
        std::cerr << "experiments: invariant violation on emitted rows\n";
        return 1;
    }
    return 0;
}

int run_selftest(const RunConfig& cfg) {
    // equivalence of the engine and the path-enumeration reference on every
    // short binary sequence
    std::uint64_t eq_total = 0, eq_pass = 0;
    for (int K = 1; K <= 3; ++K)
        for (double theta : {0.1, 0.5, 0.9}) {
            SwitchPriorConfig prior = SwitchPriorConfig::defaults(K, theta);
            for (int n = 0; n <= 4; ++n)
                for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
                    std::vector<int> xs(n);
                    for (int i = 0; i < n; ++i) xs[i] = (bits >> i) & 1;
                    std::vector<int> orders(K);
                    for (int i = 0; i < K; ++i) orders[i] = i;
                    LossTable table = binary_markov_loss_table(xs, orders);
                    BruteForceResult oracle = brute_force_switch(table, prior);
                    SwitchWeights sw = switch_init(prior);
                    for (const auto& row : table) switch_step(sw, row, prior);
                    double err = std::abs(marginal_loglik(sw) - oracle.log_marginal);
                    for (int k = 0; k < K; ++k) {
                        err = std::max(err, std::abs(sw.wa[k] - oracle.log_wa[k]));
                        err = std::max(err, std::abs(sw.wb[k] - oracle.log_wb[k]));
                    }
                    ++eq_total;
                    if (err <= 1e-12) ++eq_pass;
                }
        }
    std::cout << "oracle-equivalence: " << eq_pass << "/" << eq_total << " instances within 1e-12\n";

    // mixture bound on random sequences
    CounterRng rng = CounterRng::seeded(cfg.seed);
    std::uint64_t mb_total = 0, mb_pass = 0;
    SwitchPriorConfig prior = SwitchPriorConfig::defaults(2, cfg.theta);
    for (int trial = 0; trial < 100; ++trial) {
        CounterRng stream = rng.split(trial);
        std::vector<MarkovState> bank;
        bank.emplace_back(0, 2);
        bank.emplace_back(1, 2);
        SwitchWeights sw = switch_init(prior);
        BmaState bma = bma_init(prior.model_prior);
        std::vector<double> lp(2), cum(2, 0.0);
        bool ok = true;
        for (int i = 0; i < 500; ++i) {
            int x = stream.next_unit() < 0.5 ? 1 : 0;
            for (int k = 0; k < 2; ++k) {
                lp[k] = std::log(bank[k].predict_symbol(x));
                bank[k].observe(x);
                cum[k] += lp[k];
            }
            bma_step(bma, lp);
            switch_step(sw, lp, prior);
            double lsw = sw.loglik;
            double lm1 = std::log1p(-prior.theta);
            if (lsw + 1e-9 < lm1 + bma_loglik(bma)) ok = false;
            for (int k = 0; k < 2; ++k)
                if (lsw + 1e-9 < lm1 + std::log(prior.model_prior(k + 1)) + cum[k]) ok = false;
        }
        ++mb_total;
        if (ok) ++mb_pass;
    }
    std::cout << "mixture-bound: " << mb_pass << "/" << mb_total << " sequences within 1e-9\n";
    return (eq_pass == eq_total && mb_pass == mb_total) ? 0 : 1;
}

} // namespace

nlohmann::json RunConfig::echo() const {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    j["theta"] = theta;
    j["prior-k"] = prior_k;
    j["prior-t"] = prior_t;
    if (!input.empty()) j["input"] = input;
    j["out"] = out_dir;
    j["orders"] = orders_to_string(orders);
    j["n"] = n;
    j["replicates"] = replicates;
    j["density"] = density;
    j["theta-star"] = theta_star;
    j["stride"] = stride;
    j["kmax"] = kmax;
    j["workers"] = workers;
    j["seed"] = seed;
    return j;
}

RunConfig parse_and_validate(const std::vector<std::string>& args) {
    // locate the subcommand and any config file before the real parse, so
    // config values can be spliced in as lower-precedence tokens
    std::string subcmd;
    std::string config_path;
    bool seed_on_cli = false;
    bool wants_help = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (subcmd.empty() && !a.empty() && a[0] != '-') subcmd = a;
        if (a == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
        if (a == "--seed" || a.rfind("--seed=", 0) == 0) seed_on_cli = true;
        if (a == "-h" || a == "--help") wants_help = true;
    }

    RunConfig cfg;
    std::string orders_text = orders_to_string(cfg.orders);
    std::string config_echo_target;

    CLI::App app{"switch-distribution model selection and averaging", "switchcast"};
    app.require_subcommand(1);
    std::vector<CLI::App*> subs;
    for (std::size_t s = 0; s < kSubcommands.size(); ++s) {
        const std::string& name = kSubcommands[s];
        CLI::App* sub = app.add_subcommand(name, kSubcommandHelp[s]);
        auto opt = [&](const std::string& flag, auto& target, const std::string& help) {
            return sub->add_option(flag, target, help)
                ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        };
        opt("--config", config_echo_target, "flat JSON config file; explicit flags win");
        opt("--theta", cfg.theta, "switch continuation parameter, in [0,1)");
        opt("--prior-k", cfg.prior_k, "strategy prior: harmonic | uniform");
        opt("--prior-t", cfg.prior_t, "switch-time prior: harmonic | geometric:<rho>");
        opt("--input", cfg.input, "input corpus (byte alphabet)");
        opt("--out", cfg.out_dir, "output directory");
        opt("--orders", orders_text, "comma-separated Markov orders");
        opt("--n", cfg.n, "sample size");
        opt("--replicates", cfg.replicates, "replicates / seed count");
        opt("--density", cfg.density, "source density: uniform | linear:a,b | piecewise:...");
        opt("--theta-star", cfg.theta_star, "Bernoulli parameter of the consistency source");
        opt("--stride", cfg.stride, "emit every stride-th row (0: geometric grid)");
        opt("--kmax", cfg.kmax, "largest histogram strategy (0: ceil(sqrt(n)))");
        opt("--workers", cfg.workers, "parallel replicate workers (0: logical cores)");
        opt("--seed", cfg.seed, "root seed for all randomness");
        subs.push_back(sub);
    }

    if (wants_help) {
        for (std::size_t i = 0; i < kSubcommands.size(); ++i)
            if (kSubcommands[i] == subcmd) throw HelpRequested{subs[i]->help()};
        throw HelpRequested{app.help()};
    }

    if (subcmd.empty())
        throw std::invalid_argument(
            "missing subcommand (catchup | histsim | consistency | switch | selftest)");

    std::vector<std::string> tokens;
    bool seed_in_config = false;
    if (!config_path.empty()) {
        for (std::string& t : config_file_tokens(config_path)) {
            if (t.rfind("--seed=", 0) == 0) seed_in_config = true;
            tokens.push_back(std::move(t));
        }
    }

    std::vector<std::string> final_args;
    final_args.push_back(subcmd);
    for (const std::string& t : tokens) final_args.push_back(t);
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i == 0 && args[i] == subcmd) continue; // re-added above
        final_args.push_back(args[i]);
    }
    // CLI11's vector overload consumes arguments from the back
    std::reverse(final_args.begin(), final_args.end());
    try {
        app.parse(final_args);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw std::invalid_argument(e.what());
    }

    for (std::size_t i = 0; i < kSubcommands.size(); ++i)
        if (subs[i]->parsed()) cfg.subcommand = kSubcommands[i];

    if (!seed_on_cli && !seed_in_config)
        if (const char* env = std::getenv("SWITCHCAST_SEED")) cfg.seed = std::stoull(env);

    cfg.orders = parse_orders(orders_text);

    // validation with field-named messages
    if (!(cfg.theta >= 0.0 && cfg.theta < 1.0))
        throw std::invalid_argument("theta: must be in [0,1)");
    if (cfg.replicates < 1) throw std::invalid_argument("replicates: must be >= 1");
    if (cfg.n < 1) throw std::invalid_argument("n: must be >= 1");
    if (cfg.orders.empty()) throw std::invalid_argument("orders: list must be nonempty");
    for (int r : cfg.orders)
        if (r < 0 || r > 7) throw std::invalid_argument("orders: each order must be in 0..7");
    if (cfg.kmax < 0) throw std::invalid_argument("kmax: must be >= 0");
    if (cfg.workers < 0) throw std::invalid_argument("workers: must be >= 0");
    parse_density(cfg.density); // reject bad densities at validation time
    build_prior(cfg, 2);        // reject bad prior selectors
    if (!(cfg.theta_star >= 0.0 && cfg.theta_star <= 1.0))
        throw std::invalid_argument("theta-star: must be in [0,1]");
    if (cfg.subcommand == "catchup" || cfg.subcommand == "switch") {
        if (cfg.input.empty()) throw std::invalid_argument("input: required for this subcommand");
        if (!std::filesystem::exists(cfg.input))
            throw std::invalid_argument("input: file not found: " + cfg.input);
    }
    if (cfg.workers == 0) {
        unsigned hc = std::thread::hardware_concurrency();
        cfg.workers = hc == 0 ? 1 : static_cast<int>(hc);
    }
    return cfg;
}

int execute(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.subcommand == "catchup") return run_catchup_like(cfg, false);
    if (cfg.subcommand == "switch") return run_catchup_like(cfg, true);
    if (cfg.subcommand == "histsim") return run_histsim_cmd(cfg);
    if (cfg.subcommand == "consistency") return run_consistency_cmd(cfg);
    if (cfg.subcommand == "selftest") return run_selftest(cfg);
    throw std::invalid_argument("unknown subcommand: " + cfg.subcommand);
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        RunConfig cfg = parse_and_validate(args);
        return execute(cfg);
    } catch (const HelpRequested& h) {
        std::cout << h.text;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "switchcast: " << e.what() << "\n";
        return 1;
    }
}

} // namespace switchcast
