// multent - exact counting, entropy series, and diagnostics for
// multiplicative shift systems.

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "multent/multent.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace multent;

constexpr int kSchemaVersion = 1;

std::string fmt9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

// floats are rounded to 9 significant digits before serialization
double round9(double x) { return std::strtod(fmt9(x).c_str(), nullptr); }

std::vector<long long> parse_list(const std::string& text) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw CLI::ValidationError("list", "empty element in list");
        out.push_back(std::stoll(item));
    }
    if (out.empty()) throw CLI::ValidationError("list", "empty list");
    return out;
}

struct OutputMode {
    bool json_out = false;
    bool csv_out = false;
    bool dot_out = false;
};

void add_output_flags(CLI::App* cmd, OutputMode& mode, bool with_dot = false) {
    auto* j = cmd->add_flag("--json", mode.json_out, "machine-readable JSON output");
    auto* c = cmd->add_flag("--csv", mode.csv_out, "one CSV row per series entry");
    j->excludes(c);
    c->excludes(j);
    if (with_dot) {
        auto* d = cmd->add_flag("--dot", mode.dot_out, "Graphviz DOT output");
        d->excludes(j);
        d->excludes(c);
        j->excludes(d);
        c->excludes(d);
    }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

Convention parse_convention(const std::string& text) {
    if (text == "inclusive") return Convention::inclusive;
    if (text == "strict") return Convention::strict;
    throw CLI::ValidationError("--convention", "must be 'inclusive' or 'strict'");
}

int resolve_threads(int flag_value) {
    int threads = flag_value;  // -1: flag absent; the environment then applies
    if (threads == -1) {
        if (const char* env = std::getenv("MULTENT_THREADS")) threads = std::atoi(env);
    }
    if (threads == -1) threads = 1;
    if (threads < 1) throw std::invalid_argument("thread count must be >= 1");
    return threads;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact pattern counting and entropy bounds for multiplicative shift systems"};
    app.require_subcommand(1);

    int threads_flag = -1;
    app.add_option("--threads", threads_flag,
                   "engine thread hint (default: MULTENT_THREADS or 1)");

    // ---- qseq ----------------------------------------------------------
    auto* qseq = app.add_subcommand("qseq", "enumerate the multiplicative semigroup");
    std::string qs_gamma;
    long long qs_count = 10;
    bool qs_prime = false;
    OutputMode qs_mode;
    qseq->add_option("--gamma", qs_gamma, "multipliers, e.g. 2,3")->required();
    qseq->add_option("--count", qs_count, "number of elements");
    qseq->add_flag("--prime-base", qs_prime, "enumerate over the prime base");
    add_output_flags(qseq, qs_mode);

    // ---- density -------------------------------------------------------
    auto* density = app.add_subcommand("density", "copy counts and range decomposition");
    std::string de_gamma;
    long long de_k = 1, de_n = 1;
    bool de_decompose = false;
    OutputMode de_mode;
    density->add_option("--gamma", de_gamma)->required();
    density->add_option("--k", de_k, "chain length");
    density->add_option("--n", de_n, "range bound")->required();
    density->add_flag("--decompose", de_decompose, "emit the full chain decomposition of [1,n]");
    add_output_flags(density, de_mode);

    // ---- count ---------------------------------------------------------
    auto* count = app.add_subcommand("count", "exact admissible pattern counts");
    std::string co_gamma, co_allowed = "0", co_convention = "inclusive";
    long long co_k = 1;
    int co_symbols = 2;
    bool co_series = false, co_ratios = false;
    OutputMode co_mode;
    count->add_option("--gamma", co_gamma)->required();
    count->add_option("--k", co_k, "lattice index")->required();
    count->add_option("--symbols", co_symbols, "symbol count N");
    count->add_option("--allowed", co_allowed, "allowed products, e.g. 0 or 0,2");
    count->add_option("--convention", co_convention, "inclusive | strict");
    count->add_flag("--series", co_series, "emit the whole series b_1..b_k");
    count->add_flag("--ratios", co_ratios, "with --series: also emit ratios b_k/b_{k-1}");
    add_output_flags(count, co_mode);

    // ---- entropy -------------------------------------------------------
    auto* entropy = app.add_subcommand("entropy", "partial entropy sums and tail bounds");
    std::string en_gamma, en_allowed = "0", en_convention = "inclusive";
    long long en_terms = 1;
    int en_symbols = 2;
    bool en_error = false;
    OutputMode en_mode;
    entropy->add_option("--gamma", en_gamma)->required();
    entropy->add_option("--terms", en_terms)->required();
    entropy->add_option("--symbols", en_symbols);
    entropy->add_option("--allowed", en_allowed);
    entropy->add_option("--convention", en_convention);
    entropy->add_flag("--with-error", en_error, "include the certified tail bound");
    add_output_flags(entropy, en_mode);

    // ---- coupled -------------------------------------------------------
    auto* coupled = app.add_subcommand("coupled", "coupled-system counts and entropy bounds");
    std::string cp_sft, cp_allowed = "0";
    long long cp_q = 2, cp_k = 2, cp_root = 0;
    int cp_symbols = 2;
    OutputMode cp_mode;
    coupled->add_option("--q", cp_q, "multiplier Q")->required();
    coupled->add_option("--sft", cp_sft, "transition matrix, e.g. \"1,1;1,0\"")->required();
    coupled->add_option("--k", cp_k, "graph degree")->required();
    coupled->add_option("--symbols", cp_symbols);
    coupled->add_option("--allowed", cp_allowed);
    coupled->add_option("--root", cp_root, "root label (default: smallest generic root)");
    add_output_flags(coupled, cp_mode);

    // ---- connect -------------------------------------------------------
    auto* connect = app.add_subcommand("connect", "obstruction-graph diagnostics for base 2,3");
    long long cn_k = 4, cn_bound = 100, cn_arms = 0, cn_lmax = 100;
    bool cn_families = false;
    OutputMode cn_mode;
    connect->add_option("--k", cn_k, "chain degree");
    connect->add_option("--bound", cn_bound, "largest chain root");
    connect->add_option("--arms", cn_arms, "classify the arms of one chain root");
    connect->add_flag("--families", cn_families, "verify the consecutive chain families");
    connect->add_option("--lmax", cn_lmax, "family parameter bound for --families");
    add_output_flags(connect, cn_mode, /*with_dot=*/true);

    // ---- oracle --------------------------------------------------------
    auto* oracle = app.add_subcommand("oracle", "cross-check engines against exhaustive oracles");
    oracle->require_subcommand(1);
    auto* ora_count = oracle->add_subcommand("count", "lattice count vs brute force");
    std::string oc_gamma, oc_allowed = "0", oc_convention = "inclusive";
    long long oc_k = 1;
    int oc_symbols = 2;
    OutputMode oc_mode;
    ora_count->add_option("--gamma", oc_gamma)->required();
    ora_count->add_option("--k", oc_k)->required();
    ora_count->add_option("--symbols", oc_symbols);
    ora_count->add_option("--allowed", oc_allowed);
    ora_count->add_option("--convention", oc_convention);
    add_output_flags(ora_count, oc_mode);

    auto* ora_seq = oracle->add_subcommand("sequence", "sequence count vs exhaustive filter");
    std::string os_gamma, os_allowed = "0";
    long long os_n = 1;
    int os_symbols = 2;
    OutputMode os_mode;
    ora_seq->add_option("--gamma", os_gamma)->required();
    ora_seq->add_option("--n", os_n)->required();
    ora_seq->add_option("--symbols", os_symbols);
    ora_seq->add_option("--allowed", os_allowed);
    add_output_flags(ora_seq, os_mode);

    auto* ora_coupled = oracle->add_subcommand("coupled", "coupled count vs brute force");
    std::string od_sft, od_allowed = "0";
    long long od_q = 2, od_k = 2, od_root = 0;
    int od_symbols = 2;
    OutputMode od_mode;
    ora_coupled->add_option("--q", od_q)->required();
    ora_coupled->add_option("--sft", od_sft)->required();
    ora_coupled->add_option("--k", od_k)->required();
    ora_coupled->add_option("--symbols", od_symbols);
    ora_coupled->add_option("--allowed", od_allowed);
    ora_coupled->add_option("--root", od_root);
    add_output_flags(ora_coupled, od_mode);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // normalize every usage problem to exit code 1 (0 for --help)
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        resolve_threads(threads_flag);  // validated; engines are deterministic

        if (de_mode.csv_out && !de_decompose)
            throw std::invalid_argument("CSV output applies to series-style output");
        if (co_mode.csv_out && !co_series)
            throw std::invalid_argument("CSV output requires --series");
        if (cp_mode.csv_out || cn_mode.csv_out)
            throw std::invalid_argument("CSV output applies to series commands");

        if (*qseq) {
            const GammaSet g = validate_gamma(parse_list(qs_gamma));
            const SmoothSequence s =
                smooth_sequence(g, qs_prime, static_cast<std::size_t>(qs_count));
            if (qs_mode.json_out) {
                json values = json::array();
                for (const BigInt& v : s.values) values.push_back(v.get_str());
                emit(json{{"schema_version", kSchemaVersion},
                          {"gamma", g.gammas},
                          {"base", s.base},
                          {"values", values}});
            } else if (qs_mode.csv_out) {
                std::cout << "k,q\n";
                for (std::size_t i = 0; i < s.values.size(); ++i)
                    std::cout << i + 1 << "," << s.values[i].get_str() << "\n";
            } else {
                for (const BigInt& v : s.values) std::cout << v.get_str() << "\n";
            }
        } else if (*density) {
            const GammaSet g = validate_gamma(parse_list(de_gamma));
            if (de_decompose) {
                const ChainDecomposition d = decompose_range(de_n, g);
                if (de_mode.json_out) {
                    json chains = json::array();
                    for (auto [root, len] : d.chains)
                        chains.push_back({{"root", root}, {"length", len}});
                    emit(json{{"schema_version", kSchemaVersion},
                              {"gamma", g.gammas},
                              {"n", de_n},
                              {"chains", chains}});
                } else if (de_mode.csv_out) {
                    std::cout << "root,length\n";
                    for (auto [root, len] : d.chains)
                        std::cout << root << "," << len << "\n";
                } else {
                    for (auto [root, len] : d.chains)
                        std::cout << root << " -> " << len << "\n";
                }
            } else {
                const DensityReport r = copy_count(de_k, de_n, g);
                if (de_mode.json_out) {
                    emit(json{{"schema_version", kSchemaVersion},
                              {"gamma", g.gammas},
                              {"k", r.k},
                              {"n", r.n},
                              {"alpha", r.alpha},
                              {"empirical", rat_str(r.empirical)},
                              {"limit", rat_str(r.limit)},
                              {"beta", rat_str(beta(g))}});
                } else {
                    std::cout << "alpha(" << r.k << ";" << r.n << ") = " << r.alpha
                              << "  empirical " << rat_str(r.empirical) << "  limit "
                              << rat_str(r.limit) << "\n";
                }
            }
        } else if (*count) {
            const GammaSet g = validate_gamma(parse_list(co_gamma));
            const ConstraintSystem cs(co_symbols, parse_list(co_allowed));
            const Convention conv = parse_convention(co_convention);
            if (co_series) {
                const long long series_max = conv == Convention::inclusive ? co_k : co_k - 1;
                if (series_max < 1) throw CLI::ValidationError("--k", "series needs k >= 2 for strict");
                const std::vector<BigInt> b = count_pattern_series(g, cs, series_max);
                const std::vector<BigInt> q = smooth_values(g, static_cast<std::size_t>(co_k));
                auto entry_count = [&](long long k) -> const BigInt& {
                    return conv == Convention::inclusive ? b[static_cast<std::size_t>(k)]
                                                         : b[static_cast<std::size_t>(k - 1)];
                };
                if (co_mode.csv_out) {
                    std::cout << (co_ratios ? "k,q,count,ratio\n" : "k,q,count\n");
                    for (long long k = 1; k <= co_k; ++k) {
                        std::cout << k << "," << q[static_cast<std::size_t>(k - 1)].get_str()
                                  << "," << entry_count(k).get_str();
                        if (co_ratios) {
                            std::cout << ",";
                            if (k >= 2 && entry_count(k - 1) != 0) {
                                BigRat r(entry_count(k), entry_count(k - 1));
                                r.canonicalize();
                                std::cout << rat_str(r);
                            }
                        }
                        std::cout << "\n";
                    }
                } else {
                    json rows = json::array();
                    for (long long k = 1; k <= co_k; ++k) {
                        json row{{"k", k},
                                 {"q", q[static_cast<std::size_t>(k - 1)].get_str()},
                                 {"count", entry_count(k).get_str()}};
                        if (co_ratios && k >= 2 && entry_count(k - 1) != 0) {
                            BigRat r(entry_count(k), entry_count(k - 1));
                            r.canonicalize();
                            row["ratio"] = rat_str(r);
                        }
                        rows.push_back(row);
                    }
                    emit(json{{"schema_version", kSchemaVersion},
                              {"gamma", g.gammas},
                              {"convention", to_string(conv)},
                              {"symbols", cs.num_symbols},
                              {"allowed", cs.allowed},
                              {"series", rows}});
                }
            } else {
                const SmoothLattice lat = build_lattice(g, co_k, conv);
                const PatternCount pc = count_patterns(lat, cs);
                if (co_mode.json_out) {
                    emit(json{{"schema_version", kSchemaVersion},
                              {"gamma", g.gammas},
                              {"k", co_k},
                              {"convention", to_string(conv)},
                              {"symbols", cs.num_symbols},
                              {"allowed", cs.allowed},
                              {"cells", lat.cells.size()},
                              {"count", pc.exact.get_str()},
                              {"log", round9(pc.log_value)}});
                } else {
                    std::cout << pc.exact.get_str() << "\n";
                }
            }
        } else if (*entropy) {
            const GammaSet g = validate_gamma(parse_list(en_gamma));
            const ConstraintSystem cs(en_symbols, parse_list(en_allowed));
            const Convention conv = parse_convention(en_convention);
            if (en_mode.csv_out) {
                const std::vector<EntropyEstimate> series =
                    partial_entropy_series(g, cs, en_terms, conv);
                const std::vector<BigInt> q =
                    smooth_values(g, static_cast<std::size_t>(en_terms) + 1);
                std::cout << "k,q,h_partial\n";
                for (long long k = 1; k <= en_terms; ++k)
                    std::cout << k << "," << q[static_cast<std::size_t>(k - 1)].get_str() << ","
                              << fmt9(series[static_cast<std::size_t>(k - 1)].value) << "\n";
            } else if (en_mode.json_out) {
                const EntropyEstimate est = partial_entropy(g, cs, en_terms, conv);
                json j{{"schema_version", kSchemaVersion},
                       {"gamma", g.gammas},
                       {"terms", est.terms},
                       {"convention", to_string(est.convention)},
                       {"symbols", cs.num_symbols},
                       {"allowed", cs.allowed},
                       {"beta", rat_str(est.beta_value)},
                       {"h_partial", round9(est.value)},
                       {"dim_M", round9(minkowski_dimension(est.value, cs.num_symbols))}};
                if (en_error) j["tail_bound"] = round9(est.tail_bound);
                emit(j);
            } else {
                const EntropyEstimate est = partial_entropy(g, cs, en_terms, conv);
                std::cout << "h_partial = " << fmt9(est.value) << "\n";
                if (en_error) std::cout << "tail_bound = " << fmt9(est.tail_bound) << "\n";
                std::cout << "dim_M = "
                          << fmt9(minkowski_dimension(est.value, cs.num_symbols)) << "\n";
            }
        } else if (*coupled) {
            ConstraintSystem cs(cp_symbols, parse_list(cp_allowed));
            cs.sft = SftMatrix::parse(cp_sft);
            const CoupledBounds b = entropy_bounds(cp_q, cs, cp_k, cp_root);
            if (cp_mode.json_out) {
                emit(json{{"schema_version", kSchemaVersion},
                          {"q", cp_q},
                          {"k", cp_k},
                          {"root", cp_root == 0 ? default_coupled_root(cp_q) : cp_root},
                          {"symbols", cs.num_symbols},
                          {"allowed", cs.allowed},
                          {"vertices", coupled_vertex_count_formula(cp_q, cp_k).get_str()},
                          {"count", b.count.exact.get_str()},
                          {"lower", round9(b.lower)},
                          {"upper", round9(b.upper)},
                          {"padding_admissible", b.padding_admissible}});
            } else {
                std::cout << "count = " << b.count.exact.get_str() << "\n"
                          << "lower = " << fmt9(b.lower) << "\n"
                          << "upper = " << fmt9(b.upper) << "\n";
            }
        } else if (*connect) {
            if (cn_arms > 0) {
                const ArmReport r = classify_arms(cn_arms);
                json arms = json::array();
                for (const Arm& a : r.arms) {
                    json e{{"arm", std::to_string(a.multiplier) + (a.sign > 0 ? "i+1" : "i-1")},
                           {"value", a.value}};
                    if (a.classified) {
                        e["l"] = a.l;
                        e["j"] = a.j;
                        e["direction"] = a.upward ? "up" : "down";
                    } else {
                        e["l"] = nullptr;
                    }
                    arms.push_back(e);
                }
                emit(json{{"schema_version", kSchemaVersion},
                          {"i", r.i},
                          {"residue_family", r.residue_plus1 ? "6k+1" : "6k+5"},
                          {"k_residue", r.k_residue},
                          {"arms", arms},
                          {"up", r.up_count},
                          {"down", r.down_count}});
            } else if (cn_families) {
                json fams = json::array();
                for (int f = 1; f <= 4; ++f)
                    for (int s = 1; s <= family_sub_count(f); ++s) {
                        const auto ws = verify_consecutive_family(f, s, cn_lmax);
                        fams.push_back({{"family", f},
                                        {"sub", s},
                                        {"verified", ws.size()},
                                        {"first_witness",
                                         {{"chain_a", ws.front().root_a},
                                          {"chain_b", ws.front().root_b},
                                          {"member_a", ws.front().member_a},
                                          {"member_b", ws.front().member_b}}}});
                    }
                emit(json{{"schema_version", kSchemaVersion},
                          {"l_max", cn_lmax},
                          {"families", fams}});
            } else {
                const ConnectivityReport rep = connectivity_report(cn_k, cn_bound);
                const ObstructionGraph g = build_obstruction_graph(cn_k, rep.search_bound);
                if (cn_mode.dot_out) {
                    std::cout << to_dot(build_obstruction_graph(cn_k, cn_bound));
                } else if (cn_mode.json_out) {
                    json j = to_json(g, rep);
                    json out{{"schema_version", kSchemaVersion},
                             {"degree", rep.degree},
                             {"bound", rep.query_bound},
                             {"search_bound", rep.search_bound},
                             {"all_connected", rep.all_connected}};
                    out.update(j);
                    emit(out);
                } else {
                    std::cout << "components = " << rep.component_count << "\n"
                              << "all_connected = " << (rep.all_connected ? "true" : "false")
                              << "\n";
                }
            }
        } else if (*oracle) {
            if (*ora_count) {
                const GammaSet g = validate_gamma(parse_list(oc_gamma));
                const ConstraintSystem cs(oc_symbols, parse_list(oc_allowed));
                const SmoothLattice lat = build_lattice(g, oc_k, parse_convention(oc_convention));
                const PatternCount a = count_patterns(lat, cs);
                const PatternCount b = brute_force_count(lat, cs);
                emit(json{{"schema_version", kSchemaVersion},
                          {"engine", a.exact.get_str()},
                          {"oracle", b.exact.get_str()},
                          {"match", a.exact == b.exact}});
                if (a.exact != b.exact) return 1;
            } else if (*ora_seq) {
                const GammaSet g = validate_gamma(parse_list(os_gamma));
                const ConstraintSystem cs(os_symbols, parse_list(os_allowed));
                const PatternCount a = sequence_count_exact(g, cs, os_n);
                const PatternCount b = sequence_count_naive(g, cs, os_n);
                emit(json{{"schema_version", kSchemaVersion},
                          {"engine", a.exact.get_str()},
                          {"oracle", b.exact.get_str()},
                          {"match", a.exact == b.exact}});
                if (a.exact != b.exact) return 1;
            } else if (*ora_coupled) {
                ConstraintSystem cs(od_symbols, parse_list(od_allowed));
                cs.sft = SftMatrix::parse(od_sft);
                const long long root = od_root == 0 ? default_coupled_root(od_q) : od_root;
                const CoupledGraph g = build_coupled_graph(od_q, root, od_k);
                const PatternCount a = count_coupled_patterns(g, cs);
                const PatternCount b = brute_force_coupled(g, cs);
                emit(json{{"schema_version", kSchemaVersion},
                          {"engine", a.exact.get_str()},
                          {"oracle", b.exact.get_str()},
                          {"match", a.exact == b.exact}});
                if (a.exact != b.exact) return 1;
            }
        }
    } catch (const oversize_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
