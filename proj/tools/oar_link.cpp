// oar-link: CLI for the O-A-R semantic link simulator.
//
// Subcommands:
//   run          execute a sweep from a JSON config
//   gen-vocab    write the builtin vocabulary as JSON
//   gen-codebook build and persist a codebook
//   ged          graph edit distance between two graph JSON files
//   validate     check a JSONL corpus line by line
//
// Exit codes: 0 success, 1 configuration/data error, 2 I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "oarlink/ged.hpp"
#include "oarlink/harness.hpp"

using namespace oarlink;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_run(const std::string& config_path, const std::string& out_override, bool jsonl,
            int threads) {
    ExperimentConfig cfg = ExperimentConfig::load(config_path);
    if (!out_override.empty()) cfg.output = out_override;
    if (jsonl) cfg.jsonl = true;
    if (const char* env = std::getenv("OAR_LINK_THREADS")) {
        try {
            threads = std::stoi(env);
        } catch (const std::exception&) {
            throw ConfigError("OAR_LINK_THREADS must be an integer");
        }
    }
    const RuntimeContext ctx = RuntimeContext::create(cfg);
    run_sweep(ctx, ctx.cfg.output, threads, &std::cout);
    return 0;
}

int cmd_ged(const std::string& path1, const std::string& path2, bool force_exact,
            bool force_approx) {
    const OarGraph g1 = parse_graph(read_file(path1));
    const OarGraph g2 = parse_graph(read_file(path2));
    GedResult r;
    if (force_exact)
        r = ged_exact(g1, g2);
    else if (force_approx)
        r = ged_approximate(g1, g2);
    else
        r = ged(g1, g2);
    std::cout << "raw " << fmt_g6(r.raw) << "\nnormalized " << fmt_g6(r.normalized) << "\nmode "
              << (r.approximate ? "approximate" : "exact") << "\n";
    return 0;
}

int cmd_validate(const std::string& path, const std::string& vocab_path) {
    const Vocabulary vocab =
        vocab_path.empty() ? Vocabulary::builtin() : Vocabulary::load(vocab_path);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file: " + path);
    std::string line;
    int line_no = 0;
    int bad = 0;
    int good = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const OarGraph g = parse_graph(line);
            const ValidationReport report = validate_graph(g, vocab);
            if (report.ok()) {
                ++good;
            } else {
                ++bad;
                for (const auto& v : report.violations)
                    std::cout << "line " << line_no << ": " << v << "\n";
            }
        } catch (const ParseError& e) {
            ++bad;
            std::cout << "line " << line_no << ": parse error: " << e.what() << "\n";
        }
    }
    std::cout << good << " valid, " << bad << " invalid\n";
    return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"O-A-R semantic communication link simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    bool jsonl = false;
    int threads = 0;
    auto* run = app.add_subcommand("run", "run a sweep from a config file");
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_flag("--jsonl", jsonl, "also write per-trial records");
    run->add_option("--threads", threads, "worker threads (0 = OpenMP default)");

    std::string vocab_out;
    auto* gen_vocab = app.add_subcommand("gen-vocab", "write the builtin vocabulary");
    gen_vocab->add_option("--out", vocab_out, "output path")->required();

    uint64_t cb_seed = 1;
    std::string cb_out, cb_vocab;
    auto* gen_cb = app.add_subcommand("gen-codebook", "build and save a codebook");
    gen_cb->add_option("--seed", cb_seed, "codebook seed");
    gen_cb->add_option("--out", cb_out, "output path")->required();
    gen_cb->add_option("--vocab", cb_vocab, "vocabulary file (default builtin)");

    std::string ged_a, ged_b;
    bool ged_exact_flag = false, ged_approx_flag = false;
    auto* ged_cmd = app.add_subcommand("ged", "graph edit distance between two graph files");
    ged_cmd->add_option("graph1", ged_a, "first graph JSON file")->required();
    ged_cmd->add_option("graph2", ged_b, "second graph JSON file")->required();
    ged_cmd->add_flag("--exact", ged_exact_flag, "force the exact search");
    ged_cmd->add_flag("--approx", ged_approx_flag, "force the assignment upper bound");

    std::string corpus_path, validate_vocab;
    auto* validate_cmd = app.add_subcommand("validate", "validate a JSONL graph corpus");
    validate_cmd->add_option("corpus", corpus_path, "corpus file (one graph per line)")
        ->required();
    validate_cmd->add_option("--vocab", validate_vocab, "vocabulary file (default builtin)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, jsonl, threads);
        if (gen_vocab->parsed()) {
            Vocabulary::builtin().save(vocab_out);
            std::cout << "wrote " << vocab_out << "\n";
            return 0;
        }
        if (gen_cb->parsed()) {
            const Vocabulary vocab =
                cb_vocab.empty() ? Vocabulary::builtin() : Vocabulary::load(cb_vocab);
            const Codebook cb = Codebook::build(vocab, cb_seed);
            const auto problems = cb.verify();
            if (!problems.empty()) throw ConfigError("codebook verification: " + problems.front());
            cb.save(cb_out);
            std::cout << "wrote " << cb_out << " (seed " << cb_seed << ")\n";
            return 0;
        }
        if (ged_cmd->parsed()) return cmd_ged(ged_a, ged_b, ged_exact_flag, ged_approx_flag);
        if (validate_cmd->parsed()) return cmd_validate(corpus_path, validate_vocab);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error at byte " << e.byte_offset << ": " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
