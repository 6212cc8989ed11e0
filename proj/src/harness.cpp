#include "critpairs/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "critpairs/spiral.hpp"
#include "critpairs/stats.hpp"

namespace critpairs {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (n_values.empty()) throw std::invalid_argument("config: n_values must be nonempty");
    for (std::size_t n : n_values)
        if (n < 4) throw std::invalid_argument("config: each n must be >= 4");
    if (alpha <= -1.0) throw std::invalid_argument("config: alpha must exceed -1");
    if (top_l < 1) throw std::invalid_argument("config: top_l must be >= 1");
    static const std::set<std::string> known = {"pairing", "fluctuations", "events",
                                                "tails", "certificates"};
    for (const auto& e : emit)
        if (!known.count(e)) throw std::invalid_argument("config: unknown emit kind: " + e);
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["alpha"] = alpha;
    j["n_values"] = n_values;
    j["trials"] = trials;
    j["master_seed"] = master_seed;
    j["top_l"] = top_l;
    j["parameters"] = {{"delta", parameters.delta},
                       {"c_n", parameters.c_n},
                       {"ell_n", parameters.ell_n},
                       {"net_budget", parameters.net_budget}};
    j["outputs"] = outputs;
    j["emit"] = emit;
    j["format"] = format == OutputFormat::kCsv ? "csv" : "jsonl";
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig cfg;
    cfg.alpha = j.value("alpha", cfg.alpha);
    if (j.contains("n_values")) cfg.n_values = j.at("n_values").get<std::vector<std::size_t>>();
    cfg.trials = j.value("trials", cfg.trials);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.top_l = j.value("top_l", cfg.top_l);
    if (j.contains("parameters")) {
        const json& p = j.at("parameters");
        cfg.parameters.delta = p.value("delta", cfg.parameters.delta);
        cfg.parameters.c_n = p.value("c_n", cfg.parameters.c_n);
        cfg.parameters.ell_n = p.value("ell_n", cfg.parameters.ell_n);
        cfg.parameters.net_budget = p.value("net_budget", cfg.parameters.net_budget);
    }
    cfg.outputs = j.value("outputs", cfg.outputs);
    if (j.contains("emit")) cfg.emit = j.at("emit").get<std::set<std::string>>();
    if (j.contains("format")) {
        const std::string f = j.at("format").get<std::string>();
        if (f == "csv") cfg.format = OutputFormat::kCsv;
        else if (f == "jsonl") cfg.format = OutputFormat::kJsonl;
        else throw std::invalid_argument("config: format must be csv or jsonl");
    }
    cfg.validate();
    return cfg;
}

std::size_t thread_pool_size() {
    if (const char* env = std::getenv("CRITPAIRS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(thread_pool_size(), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    std::exception_ptr error;
    std::mutex error_mutex;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

namespace {

struct TrialRows {
    bool solver_ok = true;
    std::string failure_reason;
    bool order_ok = true;
    double max_pair_dist = 0.0;  // max_{i<=L} |W_(i) - X_(i)(1-1/n)|
    std::vector<std::string> pairing;
    std::vector<std::string> fluctuations;
    std::vector<std::string> events;
    std::vector<std::string> tails;
    std::vector<std::string> certificates;
    // raw rank-1 statistic for the summary
    double rank1_re = 0.0, rank1_im = 0.0;
    bool has_rank1 = false;
    bool event_bits[6] = {false, false, false, false, false, false};
    bool has_events = false;
    bool certified = false;
    IdentityReport identities;
};

std::string csv_escape_json(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string params_json(const EventParams& p) {
    json j;
    j["alpha"] = p.alpha;
    j["delta"] = p.delta;
    j["eps_n"] = p.eps_n;
    j["delta_n"] = p.delta_n;
    j["eps_star_n"] = p.eps_star_n;
    j["delta_star_n"] = p.delta_star_n;
    j["astar_outer"] = p.astar_outer;
    j["c_n"] = p.c_n;
    j["ell_n"] = p.ell_n;
    j["radial_sep"] = p.radial_sep;
    j["h_threshold"] = p.h_threshold;
    j["net_eps"] = p.net_eps;
    j["net_on_astar"] = p.net_on_astar;
    return j.dump();
}

struct EmitFiles {
    bool pairing = false, fluctuations = false, events = false, tails = false,
         certificates = false;
};

void write_lines(const fs::path& path, const std::string& header,
                 const std::vector<const std::vector<std::string>*>& chunks,
                 bool csv) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    if (csv) out << header << "\n";
    for (const auto* chunk : chunks)
        for (const auto& line : *chunk) out << line << "\n";
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    fs::create_directories(cfg.outputs);
    const RadialMeasure mu = RadialMeasure::power_law(cfg.alpha);
    const bool csv = cfg.format == OutputFormat::kCsv;

    EmitFiles want;
    want.pairing = cfg.emit.count("pairing") > 0;
    want.fluctuations = cfg.emit.count("fluctuations") > 0;
    want.events = cfg.emit.count("events") > 0;
    want.tails = cfg.emit.count("tails") > 0;
    want.certificates = cfg.emit.count("certificates") > 0;

    ExperimentReport report;
    report.config = cfg;
    report.threads = thread_pool_size();

    for (std::size_t n : cfg.n_values) {
        EventParams event_params;
        if (want.events) {
            if (cfg.alpha >= 0.0)
                event_params = many_pair_params(mu, n, cfg.parameters.delta,
                                                cfg.parameters.c_n, cfg.parameters.ell_n);
            else
                event_params = neg_params(mu, n, cfg.parameters.ell_n);
            if (cfg.parameters.net_budget >= 0)
                event_params.net_budget =
                    static_cast<std::size_t>(cfg.parameters.net_budget);
        }

        std::vector<TrialRows> rows(cfg.trials);
        parallel_for(cfg.trials, [&](std::size_t t) {
            TrialRows& r = rows[t];
            RngStream stream = RngStream::from(cfg.master_seed, n, t);
            const RootSample sample = sample_roots(mu, n, stream);
            CriticalSet cps;
            try {
                cps = critical_points(sample);
            } catch (const std::exception& e) {
                r.solver_ok = false;
                r.failure_reason = e.what();
                return;
            }
            r.identities = verify_identities(sample, cps);

            const auto root_order = spiral_order_descending(sample.roots);
            const auto fluct = scaled_fluctuations(sample, cps, cfg.top_l);
            r.order_ok = fluct.empty() ? true : fluct.front().order_ok;
            if (!fluct.empty()) {
                r.rank1_re = fluct.front().value.real();
                r.rank1_im = fluct.front().value.imag();
                r.has_rank1 = true;
            }

            const auto cp_order = spiral_order_descending(cps.points);
            const double shrink = 1.0 - 1.0 / static_cast<double>(n);
            const std::size_t l = std::min(cfg.top_l, cps.points.size());
            for (std::size_t i = 0; i < l; ++i) {
                const cplx x = sample.roots[root_order[i]];
                const cplx w = cps.points[cp_order[i]];
                const double dist_first = std::abs(w - x * shrink);
                r.max_pair_dist = std::max(r.max_pair_dist, dist_first);
                if (!want.pairing) continue;
                const double dist_second =
                    std::abs(w - second_order_prediction(sample, root_order[i]));
                const bool iota_ok = nearest_root_index(sample, w) == root_order[i];
                if (csv) {
                    std::string line = std::to_string(t) + "," + std::to_string(i + 1) +
                                       "," + format_double(x.real()) + "," +
                                       format_double(x.imag()) + "," +
                                       format_double(w.real()) + "," +
                                       format_double(w.imag()) + "," +
                                       format_double(dist_first) + "," +
                                       format_double(dist_second) + "," +
                                       (iota_ok ? "1" : "0") + "," +
                                       (r.order_ok ? "1" : "0");
                    r.pairing.push_back(std::move(line));
                } else {
                    json j;
                    j["trial"] = t;
                    j["rank"] = i + 1;
                    j["re_root"] = x.real();
                    j["im_root"] = x.imag();
                    j["re_cp"] = w.real();
                    j["im_cp"] = w.imag();
                    j["dist_first"] = dist_first;
                    j["dist_second"] = dist_second;
                    j["iota_ok"] = iota_ok;
                    j["order_ok"] = r.order_ok;
                    r.pairing.push_back(j.dump());
                }
            }

            if (want.fluctuations || want.tails) {
                for (const auto& fsample : fluct) {
                    if (want.fluctuations) {
                        if (csv) {
                            std::string line =
                                std::to_string(t) + "," + std::to_string(fsample.rank) + "," +
                                format_double(fsample.value.real()) + "," +
                                format_double(fsample.value.imag()) + "," +
                                regime_name(fsample.regime) + "," +
                                (fsample.order_ok ? "1" : "0");
                            r.fluctuations.push_back(std::move(line));
                        } else {
                            json j;
                            j["trial"] = t;
                            j["rank"] = fsample.rank;
                            j["re_value"] = fsample.value.real();
                            j["im_value"] = fsample.value.imag();
                            j["regime"] = regime_name(fsample.regime);
                            j["order_ok"] = fsample.order_ok;
                            r.fluctuations.push_back(j.dump());
                        }
                    }
                    if (want.tails) {
                        if (csv) {
                            r.tails.push_back(std::to_string(t) + "," +
                                              std::to_string(fsample.rank) + "," +
                                              format_double(std::abs(fsample.value)) + "," +
                                              format_double(std::arg(fsample.value)));
                        } else {
                            json j;
                            j["trial"] = t;
                            j["rank"] = fsample.rank;
                            j["abs_value"] = std::abs(fsample.value);
                            j["arg_value"] = std::arg(fsample.value);
                            r.tails.push_back(j.dump());
                        }
                    }
                }
            }

            if (want.events) {
                const EventFlags flags = event_flags(sample, mu, event_params);
                r.has_events = true;
                r.event_bits[0] = flags.e_n;
                r.event_bits[1] = flags.f_n;
                r.event_bits[2] = flags.f_star_n;
                r.event_bits[3] = flags.f_parallel_n;
                r.event_bits[4] = flags.g_n;
                r.event_bits[5] = flags.h_n;
                const std::string pjson = params_json(flags.parameters);
                if (csv) {
                    std::string line = std::to_string(t);
                    for (bool b : r.event_bits) line += std::string(",") + (b ? "1" : "0");
                    line += "," + csv_escape_json(pjson);
                    r.events.push_back(std::move(line));
                } else {
                    json j;
                    j["trial"] = t;
                    j["e_n"] = flags.e_n;
                    j["f_n"] = flags.f_n;
                    j["f_star_n"] = flags.f_star_n;
                    j["f_parallel_n"] = flags.f_parallel_n;
                    j["g_n"] = flags.g_n;
                    j["h_n"] = flags.h_n;
                    j["parameters"] = json::parse(pjson);
                    r.events.push_back(j.dump());
                }
            }

            if (want.certificates) {
                std::vector<cplx> others;
                others.reserve(n - 1);
                for (std::size_t j = 1; j < n; ++j)
                    others.push_back(sample.roots[root_order[j]]);
                const Certificate cert = certify(sample.roots[root_order[0]], others);
                r.certified = cert.certified();
                if (csv) {
                    std::string line = std::to_string(t);
                    const auto add = [&line](const std::string& s) { line += "," + s; };
                    add(format_double(cert.xi.real()));
                    add(format_double(cert.xi.imag()));
                    add(format_double(cert.c1));
                    add(format_double(cert.c2));
                    add(format_double(cert.k_lip));
                    add(std::to_string(cert.n_other));
                    add(format_double(cert.disk_radius));
                    add(format_double(cert.predicted_center.real()));
                    add(format_double(cert.predicted_center.imag()));
                    add(format_double(cert.error_bound));
                    add(cert.cond_i ? "1" : "0");
                    add(cert.cond_ii ? "1" : "0");
                    add(cert.cond_iii ? "1" : "0");
                    add(cert.size_c_ok ? "1" : "0");
                    add(cert.size_n_ok ? "1" : "0");
                    add(cert.certified() ? "1" : "0");
                    r.certificates.push_back(std::move(line));
                } else {
                    json j;
                    j["trial"] = t;
                    j["re_xi"] = cert.xi.real();
                    j["im_xi"] = cert.xi.imag();
                    j["c1"] = cert.c1;
                    j["c2"] = cert.c2;
                    j["k_lip"] = cert.k_lip;
                    j["n_other"] = cert.n_other;
                    j["disk_radius"] = cert.disk_radius;
                    j["re_center"] = cert.predicted_center.real();
                    j["im_center"] = cert.predicted_center.imag();
                    j["error_bound"] = cert.error_bound;
                    j["cond_i"] = cert.cond_i;
                    j["cond_ii"] = cert.cond_ii;
                    j["cond_iii"] = cert.cond_iii;
                    j["size_c_ok"] = cert.size_c_ok;
                    j["size_n_ok"] = cert.size_n_ok;
                    j["certified"] = cert.certified();
                    r.certificates.push_back(j.dump());
                }
            }
        });

        // Deterministic merge in trial order.
        const std::string suffix = "_n" + std::to_string(n) +
                                   (csv ? std::string(".csv") : std::string(".jsonl"));
        const auto collect = [&rows](std::vector<std::string> TrialRows::*member) {
            std::vector<const std::vector<std::string>*> chunks;
            chunks.reserve(rows.size());
            for (const auto& r : rows) chunks.push_back(&(r.*member));
            return chunks;
        };
        if (want.pairing)
            write_lines(fs::path(cfg.outputs) / ("pairing" + suffix),
                        "trial,rank,re_root,im_root,re_cp,im_cp,dist_first,dist_second,"
                        "iota_ok,order_ok",
                        collect(&TrialRows::pairing), csv);
        if (want.fluctuations)
            write_lines(fs::path(cfg.outputs) / ("fluctuations" + suffix),
                        "trial,rank,re_value,im_value,regime,order_ok",
                        collect(&TrialRows::fluctuations), csv);
        if (want.events)
            write_lines(fs::path(cfg.outputs) / ("events" + suffix),
                        "trial,e_n,f_n,f_star_n,f_parallel_n,g_n,h_n,parameters",
                        collect(&TrialRows::events), csv);
        if (want.tails)
            write_lines(fs::path(cfg.outputs) / ("tails" + suffix),
                        "trial,rank,abs_value,arg_value", collect(&TrialRows::tails), csv);
        if (want.certificates)
            write_lines(fs::path(cfg.outputs) / ("certificates" + suffix),
                        "trial,re_xi,im_xi,c1,c2,k_lip,n_other,disk_radius,re_center,"
                        "im_center,error_bound,cond_i,cond_ii,cond_iii,size_c_ok,"
                        "size_n_ok,certified",
                        collect(&TrialRows::certificates), csv);

        // Failures file only when something failed.
        {
            std::vector<std::string> failures;
            for (std::size_t t = 0; t < rows.size(); ++t)
                if (!rows[t].solver_ok)
                    failures.push_back(std::to_string(t) + "," +
                                       csv_escape_json(rows[t].failure_reason));
            if (!failures.empty()) {
                std::vector<const std::vector<std::string>*> chunk = {&failures};
                write_lines(fs::path(cfg.outputs) / ("failures" + suffix), "trial,reason",
                            chunk, true);
            }
        }

        // Summary block.
        SummaryBlock block;
        block.n = n;
        block.trials_requested = cfg.trials;
        std::vector<double> max_dists, re1, im1;
        std::size_t order_ok_count = 0, with_events = 0;
        for (const auto& r : rows) {
            if (!r.solver_ok) {
                ++block.solver_failures;
                continue;
            }
            ++block.trials_ok;
            if (r.order_ok) ++order_ok_count;
            max_dists.push_back(r.max_pair_dist);
            if (r.has_rank1 && r.order_ok) {
                re1.push_back(r.rank1_re);
                im1.push_back(r.rank1_im);
            }
            if (r.has_events) {
                ++with_events;
                for (int b = 0; b < 6; ++b)
                    if (r.event_bits[b]) block.event_freq[b] += 1.0;
            }
            if (r.certified) ++block.certified_count;
            block.max_residual = std::max(block.max_residual, r.identities.max_residual);
            block.max_sum_error = std::max(block.max_sum_error, r.identities.sum_error);
            block.max_hull_excess = std::max(block.max_hull_excess, r.identities.hull_excess);
            block.max_glpair_error =
                std::max(block.max_glpair_error, r.identities.max_glpair_error);
        }
        if (block.trials_ok > 0)
            block.order_ok_fraction =
                static_cast<double>(order_ok_count) / static_cast<double>(block.trials_ok);
        if (!max_dists.empty()) {
            block.pair_dist_median = quantile(max_dists, 0.5);
            block.pair_dist_q90 = quantile(max_dists, 0.9);
            block.pair_dist_max = quantile(max_dists, 1.0);
        }
        if (re1.size() >= 2) {
            const Moments mre = moments(re1);
            const Moments mim = moments(im1);
            block.fluct_var_re = mre.variance;
            block.fluct_var_im = mim.variance;
            block.fluct_cov_re_im = covariance(re1, im1);
            block.fluct_kurtosis_re = mre.kurtosis;
        }
        if (with_events > 0)
            for (double& f : block.event_freq) f /= static_cast<double>(with_events);
        report.blocks.push_back(block);
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // Report + gnuplot companion for the emitted tables.
    {
        std::ofstream out(fs::path(cfg.outputs) / "report.json");
        if (!out) throw std::runtime_error("cannot write report.json");
        out << report.to_json() << "\n";
    }
    {
        std::ofstream gp(fs::path(cfg.outputs) / "plots.gp");
        if (gp) {
            gp << "# gnuplot companion for the emitted long-format tables\n"
                  "set datafile separator ','\n"
                  "set key autotitle columnhead\n"
                  "set logscale xy\n"
                  "# pairing error vs rank, one curve per n:\n";
            for (std::size_t n : cfg.n_values)
                gp << "# plot 'pairing_n" << n << ".csv' using 2:7 with points\n";
            gp << "# rank-1 fluctuation scatter:\n";
            for (std::size_t n : cfg.n_values)
                gp << "# plot 'fluctuations_n" << n
                   << ".csv' using 3:4 every ::0 with dots\n";
        }
    }
    return report;
}

std::string ExperimentReport::to_json() const {
    json j;
    j["config"] = json::parse(config.to_json());
    j["wall_seconds"] = wall_seconds;
    j["threads"] = threads;
    j["blocks"] = json::array();
    for (const auto& b : blocks) {
        json jb;
        jb["n"] = b.n;
        jb["trials_requested"] = b.trials_requested;
        jb["trials_ok"] = b.trials_ok;
        jb["solver_failures"] = b.solver_failures;
        jb["order_ok_fraction"] = b.order_ok_fraction;
        jb["pair_dist_median"] = b.pair_dist_median;
        jb["pair_dist_q90"] = b.pair_dist_q90;
        jb["pair_dist_max"] = b.pair_dist_max;
        jb["fluct_var_re"] = b.fluct_var_re;
        jb["fluct_var_im"] = b.fluct_var_im;
        jb["fluct_cov_re_im"] = b.fluct_cov_re_im;
        jb["fluct_kurtosis_re"] = b.fluct_kurtosis_re;
        jb["event_freq"] = {b.event_freq[0], b.event_freq[1], b.event_freq[2],
                            b.event_freq[3], b.event_freq[4], b.event_freq[5]};
        jb["certified_count"] = b.certified_count;
        jb["max_residual"] = b.max_residual;
        jb["max_sum_error"] = b.max_sum_error;
        jb["max_hull_excess"] = b.max_hull_excess;
        jb["max_glpair_error"] = b.max_glpair_error;
        j["blocks"].push_back(jb);
    }
    return j.dump(2);
}

} // namespace critpairs
