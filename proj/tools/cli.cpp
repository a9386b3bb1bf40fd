#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mckba/cipher.hpp"
#include "mckba/keygen.hpp"

namespace mckba::cli {

using nlohmann::ordered_json;

namespace {

bool verbose() {
    const char* v = std::getenv("MCKBA_VERBOSE");
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

void write_json(const std::string& path, const ordered_json& doc) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot create " + path);
    out << doc.dump(2) << '\n';
}

ordered_json decryption_report(const EquivalentDecryption& dec) {
    ordered_json j;
    j["ambiguous_count"] = dec.ambiguous_blocks.size();
    j["ambiguous_indices"] = dec.ambiguous_blocks;
    return j;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
};

}  // namespace

Word parse_word(const std::string& text, unsigned n, const char* what) {
    if (text.empty()) throw InvalidInput(std::string("empty value for ") + what);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
        v = std::stoull(hex ? text.substr(2) : text, &used, hex ? 16 : 10);
        if (hex) used += 2;
    } catch (const std::exception&) {
        throw InvalidInput(std::string("malformed ") + what + ": " + text);
    }
    if (used != text.size() || text[0] == '-') throw InvalidInput(std::string("malformed ") + what + ": " + text);
    require_word(v, n, what);
    return v;
}

ordered_json key_report(const EquivalentKey& key) {
    ordered_json j;
    j["n"] = key.n;
    j["key1_star"] = to_hex(key.key1_star, key.n);
    j["key1_mask"] = to_hex(key.key1_mask, key.n);
    j["key2_star"] = to_hex(key.key2_star, key.n);
    j["key2_mask"] = to_hex(key.key2_mask, key.n);
    j["keys_complete"] = key.keys_complete();

    std::size_t key1_blocks = 0, key2_blocks = 0, xor_blocks = 0, xnor_blocks = 0;
    std::vector<std::size_t> ambiguous;
    std::size_t histogram[4] = {0, 0, 0, 0};
    for (std::size_t k = 0; k < key.selectors.size(); ++k) {
        const SelectorEstimate& s = key.selectors[k];
        (s.xor_mode ? xor_blocks : xnor_blocks) += 1;
        if (s.ambiguous) {
            ambiguous.push_back(k);
            continue;
        }
        (uses_key1(s.selector) ? key1_blocks : key2_blocks) += 1;
        ++histogram[s.selector];
    }
    j["blocks"] = key.selectors.size();
    j["class_counts"] = {{"key1", key1_blocks}, {"key2", key2_blocks}};
    j["selector_histogram"] = {{"0", histogram[0]}, {"1", histogram[1]}, {"2", histogram[2]}, {"3", histogram[3]}};
    j["parity_histogram"] = {{"xor_{1,3}", xor_blocks}, {"xnor_{0,2}", xnor_blocks}};
    j["ambiguous"] = {{"count", ambiguous.size()}, {"indices", ambiguous}};
    return j;
}

ordered_json merge_report(const MergeStats& s) {
    return {{"seed_rounds", s.rounds},   {"passes", s.passes},         {"absorbed", s.absorbed},
            {"unassigned", s.unassigned}, {"informative", s.informative}, {"complete", s.complete}};
}

ordered_json profile_report(const ConfirmationProfile& p) {
    ordered_json rows = ordered_json::array();
    for (unsigned i = 0; i < p.n; ++i) {
        const BitProfile& b = p.bits[i];
        rows.push_back({{"i", i},
                        {"model_x", b.model_x},
                        {"empirical_x", p.empirical_x(i)},
                        {"delta_x", std::abs(b.model_x - p.empirical_x(i))},
                        {"model_y_zero", b.model_y_zero},
                        {"empirical_y_zero", p.empirical_y_zero(i)},
                        {"model_carry", b.model_carry},
                        {"empirical_carry", p.empirical_carry(i)},
                        {"x_confirmed", b.x_confirmed},
                        {"y_zero", b.y_zero},
                        {"carry_confirmed", b.carry_confirmed}});
    }
    return {{"n", p.n}, {"trials", p.trials}, {"exhaustive", p.exhaustive}, {"bits", rows}};
}

ordered_json tags_to_json(const std::vector<QueryTag>& tags, unsigned n, std::size_t width, std::size_t height,
                          std::uint64_t seed) {
    std::string s(tags.size(), 'A');
    for (std::size_t k = 0; k < tags.size(); ++k)
        if (tags[k] == QueryTag::PairB) s[k] = 'B';
    return {{"n", n}, {"width", width}, {"height", height}, {"seed", seed}, {"tags", s}};
}

std::vector<QueryTag> tags_from_json(const nlohmann::json& doc) {
    const std::string s = doc.at("tags").get<std::string>();
    std::vector<QueryTag> tags(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] != 'A' && s[k] != 'B') throw InvalidInput("tag record holds a symbol other than A/B");
        tags[k] = s[k] == 'A' ? QueryTag::PairA : QueryTag::PairB;
    }
    return tags;
}

namespace {

struct Options {
    unsigned n = 32;
    std::string key1, key2, x0;
    std::string in, out;
    std::uint64_t seed = 1;
    std::string alpha, beta, y;
    std::string p1, c1, p2, c2, target, report, tags, out1, out2;
    std::string policy = "key1";
    std::size_t width = 64, height = 64;
    std::uint64_t trials = 1000000;
    bool timing = false;
};

SecretKey key_from(const Options& o) {
    SecretKey key;
    require_word_size(o.n);
    key.n = o.n;
    key.key1 = parse_word(o.key1, o.n, "key1");
    key.key2 = parse_word(o.key2, o.n, "key2");
    key.x0 = parse_x0(o.x0);
    key.validate();
    return key;
}

void cmd_keygen(const Options& o, std::ostream& out) {
    const SecretKey key = keygen(o.n, o.seed);
    std::ostringstream x0;
    x0 << std::setprecision(17) << key.x0;
    ordered_json j = {{"n", key.n},
                      {"seed", o.seed},
                      {"key1", to_hex(key.key1, key.n)},
                      {"key2", to_hex(key.key2, key.n)},
                      {"key1_decimal", key.key1},
                      {"key2_decimal", key.key2},
                      {"x0", x0.str()}};
    if (!o.out.empty()) write_json(o.out, j);
    out << j.dump(2) << '\n';
}

void cmd_crypt(const Options& o, bool encrypt) {
    const SecretKey key = key_from(o);
    const Image img = read_pgm(o.in);
    write_pgm(o.out, encrypt ? encrypt_image(img, key) : decrypt_image(img, key));
}

void cmd_kernel_solve(const Options& o, std::ostream& out) {
    require_word_size(o.n);
    const KernelInstance inst{o.n, parse_word(o.alpha, o.n, "alpha"), parse_word(o.beta, o.n, "beta"),
                              parse_word(o.y, o.n, "y")};
    const KernelSolution sol = solve_kernel(inst);
    out << "value   " << to_hex(sol.key.value, o.n) << '\n'
        << "mask    " << to_hex(sol.key.mask, o.n) << '\n'
        << "y_tilde " << to_hex(inst.y_tilde(), o.n) << '\n';
    out << "plane  a b y~  case          x  c\n";
    for (unsigned i = 0; i + 1 < o.n; ++i) {
        out << std::setw(5) << i << "  " << bit_of(inst.alpha, i) << ' ' << bit_of(inst.beta, i) << ' '
            << bit_of(inst.y_tilde(), i) << "   " << std::left << std::setw(12) << to_string(sol.cases[i])
            << std::right << "  " << (bit_of(sol.key.mask, i) ? char('0' + bit_of(sol.key.value, i)) : '?') << "  "
            << (bit_of(sol.carry_mask, i) ? char('0' + bit_of(sol.carry_value, i)) : '?') << '\n';
    }
}

void finish_attack(const Options& o, const std::string& command, const EquivalentKey& key, ordered_json extra,
                   const Image& shape, const Timer& timer, std::ostream& out) {
    ordered_json report;
    report["command"] = command;
    report["n"] = o.n;
    report["width"] = shape.width;
    report["height"] = shape.height;
    report["equivalent_key"] = key_report(key);
    for (auto& [k, v] : extra.items()) report[k] = v;

    if (!o.target.empty()) {
        const AmbiguityPolicy policy = o.policy == "key2" ? AmbiguityPolicy::Key2Class : AmbiguityPolicy::Key1Class;
        const EquivalentDecryption dec = decrypt_with_equivalent(read_pgm(o.target), key, policy);
        if (!o.out.empty()) write_pgm(o.out, dec.image);
        report["target_decryption"] = decryption_report(dec);
        report["target_decryption"]["policy"] = o.policy;
    }
    if (o.timing) report["elapsed_ms"] = timer.ms();
    if (!o.report.empty()) write_json(o.report, report);
    out << command << ": key1*=" << to_hex(key.key1_star, o.n) << " key2*=" << to_hex(key.key2_star, o.n)
        << " complete=" << (key.keys_complete() ? "yes" : "no") << " ambiguous=" << key.ambiguous_count() << "/"
        << key.selectors.size() << '\n';
}

void cmd_kpa(const Options& o, std::ostream& out) {
    const Timer timer;
    const Image p1 = read_pgm(o.p1), c1 = read_pgm(o.c1), p2 = read_pgm(o.p2), c2 = read_pgm(o.c2);
    const KpaResult res = kpa_attack(p1, c1, p2, c2, o.n);
    finish_attack(o, "kpa", res.key, {{"merge", merge_report(res.merge)}}, p1, timer, out);
}

void cmd_cpa_gen(const Options& o, std::ostream& out) {
    const ChosenImages chosen = build_chosen_images(o.width, o.height, o.n, o.seed);
    write_pgm(o.out1, chosen.p1);
    write_pgm(o.out2, chosen.p2);
    write_json(o.tags, tags_to_json(chosen.tags, o.n, o.width, o.height, o.seed));
    out << "cpa-gen: " << chosen.tags.size() << " blocks\n";
}

void cmd_cpa_recover(const Options& o, std::ostream& out) {
    const Timer timer;
    const Image p1 = read_pgm(o.p1), c1 = read_pgm(o.c1), p2 = read_pgm(o.p2), c2 = read_pgm(o.c2);
    std::ifstream tf(o.tags);
    if (!tf) throw InvalidInput("cannot open " + o.tags);
    const nlohmann::json doc = nlohmann::json::parse(tf);
    if (doc.at("n").get<unsigned>() != o.n) throw InvalidInput("tag record was generated for a different n");
    const CpaResult res = cpa_recover(p1, c1, p2, c2, tags_from_json(doc), o.n);
    ordered_json extra = {{"merge", merge_report(res.merge)},
                          {"cpa", {{"joint_solves", res.stats.joint_solves},
                                   {"class_a_blocks", res.stats.class_a_blocks},
                                   {"class_b_blocks", res.stats.class_b_blocks}}}};
    finish_attack(o, "cpa-recover", res.key, extra, p1, timer, out);
}

void cmd_analyze(const Options& o, std::ostream& out) {
    const ConfirmationProfile prof = empirical_profile(o.n, o.trials, o.seed);
    out << (prof.exhaustive ? "exhaustive" : "sampled") << " profile, n=" << prof.n << ", " << prof.trials
        << " queries\n";
    out << "   i   model_x  empirical_x   |delta|   model_y0  empirical_y0\n";
    out << std::fixed << std::setprecision(4);
    for (unsigned i = 0; i < prof.n; ++i) {
        const BitProfile& b = prof.bits[i];
        out << std::setw(4) << i << std::setw(10) << b.model_x << std::setw(13) << prof.empirical_x(i)
            << std::setw(10) << std::abs(b.model_x - prof.empirical_x(i)) << std::setw(11) << b.model_y_zero
            << std::setw(14) << prof.empirical_y_zero(i) << '\n';
    }
    if (!o.report.empty()) {
        ordered_json report = {{"command", "analyze"}, {"seed", o.seed}};
        report["profile"] = profile_report(prof);
        write_json(o.report, report);
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"MCKBA/HCKBA cipher and key-recovery workbench", "mckba"};
    app.require_subcommand(1);
    Options o;

    auto* keygen = app.add_subcommand("keygen", "Generate a key with popcount(key1^key2) = ceil(n/2)");
    keygen->add_option("--n", o.n, "Word size in bits")->check(CLI::Range(2, 64));
    keygen->add_option("--seed", o.seed, "Generator seed");
    keygen->add_option("--out", o.out, "Also write the key JSON here");

    auto add_key = [&](CLI::App* sub) {
        sub->add_option("--n", o.n, "Word size in bits")->check(CLI::Range(2, 64));
        sub->add_option("--key1", o.key1, "key1 (decimal or 0x hex)")->required();
        sub->add_option("--key2", o.key2, "key2 (decimal or 0x hex)")->required();
        sub->add_option("--x0", o.x0, "Logistic map seed, decimal or p/2^k")->required();
        sub->add_option("--in", o.in, "Input PGM")->required();
        sub->add_option("--out", o.out, "Output PGM")->required();
    };
    auto* encrypt = app.add_subcommand("encrypt", "Encrypt a PGM image");
    add_key(encrypt);
    auto* decrypt = app.add_subcommand("decrypt", "Decrypt a PGM image");
    add_key(decrypt);

    auto* ksolve = app.add_subcommand("kernel-solve", "Solve y = (alpha+x)^(beta+x) for bits of x");
    ksolve->add_option("--n", o.n)->check(CLI::Range(2, 64));
    ksolve->add_option("--alpha", o.alpha)->required();
    ksolve->add_option("--beta", o.beta)->required();
    ksolve->add_option("--y", o.y)->required();

    auto add_attack_io = [&](CLI::App* sub) {
        sub->add_option("--n", o.n)->check(CLI::Range(2, 64));
        sub->add_option("--p1", o.p1)->required();
        sub->add_option("--c1", o.c1)->required();
        sub->add_option("--p2", o.p2)->required();
        sub->add_option("--c2", o.c2)->required();
        sub->add_option("--target", o.target, "Cipher-image to decrypt with the recovered key");
        sub->add_option("--out", o.out, "Where to write the decrypted target");
        sub->add_option("--report", o.report, "JSON report path");
        sub->add_option("--policy", o.policy, "Ambiguous-block policy")->check(CLI::IsMember({"key1", "key2"}));
        sub->add_flag("--timing", o.timing, "Record elapsed time in the report");
    };
    auto* kpa = app.add_subcommand("kpa", "Known-plaintext attack with two image pairs");
    add_attack_io(kpa);

    auto* cpa_gen = app.add_subcommand("cpa-gen", "Build the two chosen plain-images");
    cpa_gen->add_option("--width", o.width)->required();
    cpa_gen->add_option("--height", o.height)->required();
    cpa_gen->add_option("--n", o.n)->check(CLI::Range(2, 64));
    cpa_gen->add_option("--seed", o.seed);
    cpa_gen->add_option("--out1", o.out1)->required();
    cpa_gen->add_option("--out2", o.out2)->required();
    cpa_gen->add_option("--tags", o.tags)->required();

    auto* cpa_recover = app.add_subcommand("cpa-recover", "Chosen-plaintext key recovery");
    add_attack_io(cpa_recover);
    cpa_recover->add_option("--tags", o.tags)->required();

    auto* analyze = app.add_subcommand("analyze", "Compare model and empirical confirmation rates");
    analyze->add_option("--n", o.n)->check(CLI::Range(2, 64));
    analyze->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
    analyze->add_option("--seed", o.seed);
    analyze->add_option("--report", o.report);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (verbose()) err << "mckba: running " << app.get_subcommands().front()->get_name() << '\n';
        if (*keygen) cmd_keygen(o, out);
        else if (*encrypt) cmd_crypt(o, true);
        else if (*decrypt) cmd_crypt(o, false);
        else if (*ksolve) cmd_kernel_solve(o, out);
        else if (*kpa) cmd_kpa(o, out);
        else if (*cpa_gen) cmd_cpa_gen(o, out);
        else if (*cpa_recover) cmd_cpa_recover(o, out);
        else if (*analyze) cmd_analyze(o, out);
    } catch (const std::exception& e) {
        err << "mckba: error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace mckba::cli
