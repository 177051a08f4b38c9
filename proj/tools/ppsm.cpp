#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ppsm/bench.hpp"
#include "ppsm/client.hpp"
#include "ppsm/errors.hpp"
#include "ppsm/fasta.hpp"
#include "ppsm/hash.hpp"
#include "ppsm/server.hpp"

using namespace ppsm;

namespace {

#ifdef PPSM_TEST_SEED
class SeededRandom final : public RandomSource {
public:
    explicit SeededRandom(std::uint64_t seed) : rng_(seed) {}
    void fill(std::uint8_t* out, std::size_t n) override {
        for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(rng_());
    }

private:
    std::mt19937_64 rng_;
};
#endif

// Protocol randomness. PPSM_SEED is honored only in builds configured with
// the test feature; a release binary refuses to run with a fixed seed.
RandomSource& protocol_rng() {
    const char* seed = std::getenv("PPSM_SEED");
    if (!seed) return secure_random();
#ifdef PPSM_TEST_SEED
    static SeededRandom rng(std::strtoull(seed, nullptr, 10));
    return rng;
#else
    std::cerr << "PPSM_SEED is set but fixed seeds are disabled in this build\n";
    std::exit(2);
#endif
}

std::string pick_sequence(const std::string& path, const std::string& id, bool sanitize) {
    FastaResult result = fasta_read(path, "ACGT", sanitize);
    if (result.dropped > 0)
        std::cerr << "warning: dropped " << result.dropped << " out-of-alphabet characters\n";
    if (result.records.empty()) throw ParseError(path + ": no records");
    if (id.empty()) return result.records.front().sequence;
    for (const auto& rec : result.records)
        if (rec.id == id) return rec.sequence;
    throw ParseError(path + ": no record with id '" + id + "'");
}

std::shared_ptr<const GramDictionary> load_dict(const std::string& path) {
    return std::make_shared<const GramDictionary>(GramDictionary::deserialize(read_file(path)));
}

ProtocolParams load_params(const std::string& path) {
    return ProtocolParams::from_bytes(read_file(path));
}

std::string hex_digest(const Digest256& digest) {
    return hex(std::span<const std::uint8_t>(digest.data(), digest.size()));
}

// Session state carried between the offline request and response phases.
Bytes encode_state(const ClientState& state) {
    ByteWriter w;
    w.raw(std::string_view("PPQS"));
    w.raw(std::span<const std::uint8_t>(state.session_id.data(), state.session_id.size()));
    w.u64(state.t_max);
    return w.take();
}

ClientState decode_state(std::span<const std::uint8_t> data, const PrivateKey& sk) {
    ByteReader r(data);
    Bytes magic = r.raw(4);
    if (std::string(magic.begin(), magic.end()) != "PPQS")
        throw ParseError("not a session state file");
    ClientState state;
    state.sk = &sk;
    auto session = r.raw(state.session_id.size());
    std::copy(session.begin(), session.end(), state.session_id.begin());
    state.t_max = r.u64();
    r.expect_end();
    return state;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::strtoull(item.c_str(), nullptr, 10));
    if (out.empty()) throw ParseError("empty number list");
    return out;
}

void print_correlation(const CorrelationSummary& summary) {
    std::printf("%8s %14s %14s\n", "edits", "mean_hamming", "variance");
    for (const auto& row : summary.per_edit)
        std::printf("%8llu %14.2f %14.2f\n", static_cast<unsigned long long>(row.edits),
                    row.mean_hamming, row.variance);
    std::printf("pearson r(edits, bloom_hamming) = %.6f over %zu trials\n", summary.pearson,
                summary.trials.size());
}

int cmd_keygen(unsigned bits, const std::string& out, bool force) {
    KeyPair keys = keygen(bits, protocol_rng());
    write_file(out + ".pk", keys.pk->serialize(), force);
    write_file(out + ".sk", keys.sk.serialize(), force);
    std::cout << "wrote " << out << ".pk / " << out << ".sk (" << bits << "-bit modulus)\n";
    return 0;
}

int cmd_dict(const std::string& fasta, bool sanitize, unsigned q_min, unsigned q_max,
             std::uint64_t threshold, const std::string& out, bool force) {
    FastaResult result = fasta_read(fasta, "ACGT", sanitize);
    if (result.dropped > 0)
        std::cerr << "warning: dropped " << result.dropped << " out-of-alphabet characters\n";
    std::vector<std::string> corpus;
    for (auto& rec : result.records) corpus.push_back(std::move(rec.sequence));

    GramConfig cfg;
    cfg.q_min = static_cast<std::uint8_t>(q_min);
    cfg.q_max = static_cast<std::uint8_t>(q_max);
    GramDictionary dict = GramDictionary::build(corpus, cfg, threshold);
    write_file(out, dict.serialize(), force);
    std::cout << "dictionary: " << dict.entries().size() << " grams, q in [" << q_min << ", "
              << q_max << "], digest " << hex_digest(dict.digest()) << "\n";
    return 0;
}

int cmd_params(const std::string& dict_path, double p, std::uint32_t e_max,
               const std::string& fasta, const std::string& id, bool sanitize,
               std::uint64_t n_v_override, const std::string& out, bool force) {
    auto dict = load_dict(dict_path);
    std::string reference = pick_sequence(fasta, id, sanitize);

    ProtocolParams params;
    params.gram_cfg = dict->config();
    params.bloom.target_fp = p;
    params.bloom.expected_elements =
        n_v_override ? n_v_override : segment(reference, *dict).n_v;
    params.bloom.length_bits = required_length(p, params.bloom.expected_elements);
    params.dict_digest = dict->digest();
    params.e_max = e_max;
    params.t_max = compute_threshold(e_max, p, *dict, reference);

    write_file(out, params.canonical_bytes(), force);
    std::cout << "params: p=" << p << " n_v=" << params.bloom.expected_elements
              << " l=" << params.bloom.length_bits << " e_max=" << e_max
              << " t_max=" << params.t_max << "\n"
              << "digest " << hex_digest(params.digest()) << "\n";
    return 0;
}

int cmd_serve(const std::string& host, std::uint16_t port, const std::string& params_path,
              const std::string& dict_path, const std::string& fasta, const std::string& id,
              bool sanitize, int timeout_ms, const std::string& in, const std::string& out,
              bool force) {
    auto ctx = std::make_shared<const ServerContext>(pick_sequence(fasta, id, sanitize),
                                                     load_dict(dict_path),
                                                     load_params(params_path));
    if (!in.empty()) {
        // offline mode: one session, request and response carried by files
        MemoryStream stream(read_file(in));
        bool ok = handle_session(stream, *ctx, protocol_rng());
        write_file(out, stream.written(), force);
        std::cout << (ok ? "session complete" : "session failed") << ", response frames in "
                  << out << "\n";
        return ok ? 0 : 2;
    }

    TcpServer server(ctx, timeout_ms);
    std::uint16_t bound = server.start(host, port);
    std::cout << "listening on " << host << ":" << bound << "\n";
    server.wait();
    return 0;
}

int cmd_query(const std::string& host, std::uint16_t port, const std::string& params_path,
              const std::string& dict_path, const std::string& fasta, const std::string& id,
              bool sanitize, const std::string& pub_path, const std::string& key_path,
              const std::string& out, const std::string& in, const std::string& state_path,
              bool force) {
    ProtocolParams params = load_params(params_path);
    auto pk = PublicKey::deserialize(read_file(pub_path));
    PrivateKey sk = PrivateKey::deserialize(read_file(key_path));

    if (!in.empty()) {
        // offline phase 2: response came back by file
        ClientState state = decode_state(read_file(state_path), sk);
        Verdict verdict = read_response_file(in, state, pk);
        std::cout << (verdict.matched ? "MATCH" : "NO-MATCH") << "\n";
        return verdict.matched ? 0 : 1;
    }

    auto dict = load_dict(dict_path);
    std::string sequence = pick_sequence(fasta, id, sanitize);

    if (!out.empty()) {
        // offline phase 1: write the request frames for out-of-band transfer
        auto [query, state] = client_prepare(sequence, *dict, params, pk, sk, protocol_rng());
        write_request_file(out, query, params, force);
        write_file(state_path, encode_state(state), force);
        std::cout << "request written to " << out << ", session state to " << state_path << "\n";
        return 0;
    }

    TcpStream stream = TcpStream::connect(host, port);
    QueryReport report = run_query(stream, sequence, *dict, params, pk, sk, protocol_rng());
    std::cout << (report.matched ? "MATCH" : "NO-MATCH") << "\n"
              << "sent " << report.bytes_sent << " bytes, received " << report.bytes_received
              << " bytes\n"
              << "encrypt " << report.encrypt_ms << " ms, transfer " << report.transfer_ms
              << " ms, decrypt " << report.decrypt_ms << " ms\n";
    return report.matched ? 0 : 1;
}

int cmd_bench_corr(const std::string& fasta, const std::string& id, bool sanitize,
                   std::uint64_t length, std::uint64_t seed, const std::string& dict_path,
                   unsigned q_min, unsigned q_max, std::uint64_t threshold, double p,
                   std::uint32_t e_max, const std::string& grid_csv, std::uint64_t trials,
                   const std::string& mix_name, const std::string& csv_path, bool force) {
    std::string base;
    if (!fasta.empty()) {
        base = pick_sequence(fasta, id, sanitize);
    } else {
        static constexpr char kAlphabet[] = "ACGT";
        std::mt19937_64 gen(seed);
        base.reserve(length);
        for (std::uint64_t i = 0; i < length; ++i) base.push_back(kAlphabet[gen() % 4]);
    }

    std::shared_ptr<const GramDictionary> dict;
    if (!dict_path.empty()) {
        dict = load_dict(dict_path);
    } else {
        GramConfig cfg;
        cfg.q_min = static_cast<std::uint8_t>(q_min);
        cfg.q_max = static_cast<std::uint8_t>(q_max);
        std::vector<std::string> corpus = {base};
        dict = std::make_shared<const GramDictionary>(
            GramDictionary::build(corpus, cfg, threshold));
    }

    ProtocolParams params;
    params.gram_cfg = dict->config();
    params.bloom.target_fp = p;
    params.bloom.expected_elements = segment(base, *dict).n_v;
    params.bloom.length_bits = required_length(p, params.bloom.expected_elements);
    params.dict_digest = dict->digest();
    params.e_max = e_max;
    params.t_max = compute_threshold(e_max, p, *dict, base);

    const EditMix& mix = mix_name == "mixed" ? kMixedEdits : kSubstitutionOnly;
    std::vector<std::uint64_t> grid = parse_u64_list(grid_csv);

    std::ofstream csv;
    if (!csv_path.empty()) {
        if (!force && std::ifstream(csv_path).good()) throw IoError(csv_path + " exists");
        csv.open(csv_path);
        if (!csv) throw IoError("cannot open " + csv_path);
    }
    CorrelationSummary summary = bench_correlation(base, *dict, params, grid, trials, mix,
                                                   seed, csv.is_open() ? &csv : nullptr);
    print_correlation(summary);
    return 0;
}

int cmd_bench_proto(const std::string& lengths_csv, std::uint32_t e_max, double p,
                    unsigned q_min, unsigned q_max, unsigned bits, std::uint64_t seed) {
    GramConfig cfg;
    cfg.q_min = static_cast<std::uint8_t>(q_min);
    cfg.q_max = static_cast<std::uint8_t>(q_max);
    auto rows = bench_protocol(parse_u64_list(lengths_csv), e_max, p, cfg, bits, seed);

    std::printf("%8s %8s %8s %8s %12s %12s %10s %10s %8s\n", "length", "l", "c2s_ct", "s2c_ct",
                "c2s_bytes", "s2c_bytes", "client_ms", "server_ms", "matched");
    for (const auto& row : rows)
        std::printf("%8llu %8llu %8llu %8llu %12llu %12llu %10.1f %10.1f %8s\n",
                    static_cast<unsigned long long>(row.sequence_length),
                    static_cast<unsigned long long>(row.filter_bits),
                    static_cast<unsigned long long>(row.c2s_ciphertexts),
                    static_cast<unsigned long long>(row.s2c_ciphertexts),
                    static_cast<unsigned long long>(row.c2s_bytes),
                    static_cast<unsigned long long>(row.s2c_bytes), row.client_ms,
                    row.server_ms, row.matched ? "yes" : "no");
    return 0;
}

int cmd_report(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open " + csv_path);
    std::string line;
    if (!std::getline(in, line) || line != "edits,levenshtein,bloom_hamming,matched,seed")
        throw ParseError(csv_path + ": unexpected CSV header");

    std::vector<double> xs, ys;
    std::map<std::uint64_t, std::vector<double>> by_edits;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 5) throw ParseError(csv_path + ": bad row '" + line + "'");
        std::uint64_t edits = std::strtoull(fields[0].c_str(), nullptr, 10);
        double hamming = std::strtod(fields[2].c_str(), nullptr);
        xs.push_back(static_cast<double>(edits));
        ys.push_back(hamming);
        by_edits[edits].push_back(hamming);
    }

    std::printf("%8s %14s %14s\n", "edits", "mean_hamming", "variance");
    for (const auto& [edits, values] : by_edits) {
        double mean = 0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(values.size());
        std::printf("%8llu %14.2f %14.2f\n", static_cast<unsigned long long>(edits), mean, var);
    }
    std::printf("pearson r(edits, bloom_hamming) = %.6f over %zu trials\n", pearson(xs, ys),
                xs.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"privacy-preserving approximate string matching"};
    app.require_subcommand(1);

    bool force = false, sanitize = false;
    app.add_flag("--force", force, "overwrite existing output files");

    // keygen
    auto* keygen_cmd = app.add_subcommand("keygen", "generate a key pair");
    unsigned bits = 2048;
    std::string out, fasta, id, dict_path, params_path;
    keygen_cmd->add_option("--bits", bits, "modulus size")
        ->check(CLI::IsMember({1024u, 2048u, 3072u}));
    keygen_cmd->add_option("--out", out, "output prefix (.pk/.sk appended)")->required();

    // dict
    auto* dict_cmd = app.add_subcommand("dict", "train a gram dictionary from a FASTA corpus");
    unsigned q_min = 2, q_max = 40;
    std::uint64_t threshold = 1;
    dict_cmd->add_option("--fasta", fasta, "corpus file")->required();
    dict_cmd->add_flag("--sanitize", sanitize, "drop out-of-alphabet characters");
    dict_cmd->add_option("--q-min", q_min, "minimum gram length");
    dict_cmd->add_option("--q-max", q_max, "maximum gram length");
    dict_cmd->add_option("--threshold", threshold, "minimum gram frequency");
    dict_cmd->add_option("--out", out, "dictionary output file")->required();

    // params
    auto* params_cmd = app.add_subcommand("params", "derive and write protocol parameters");
    double p = 0.1;
    std::uint32_t e_max = 10;
    std::uint64_t n_v = 0;
    params_cmd->add_option("--dict", dict_path, "dictionary file")->required();
    params_cmd->add_option("--p", p, "Bloom filter false-positive rate");
    params_cmd->add_option("--e-max", e_max, "tolerated edit distance")->required();
    params_cmd->add_option("--fasta", fasta, "reference sequence file")->required();
    params_cmd->add_option("--id", id, "record id (default: first record)");
    params_cmd->add_flag("--sanitize", sanitize, "drop out-of-alphabet characters");
    params_cmd->add_option("--n-v", n_v, "override the expected element count");
    params_cmd->add_option("--out", out, "params output file")->required();

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "run the matching server");
    std::string host = "127.0.0.1";
    std::uint16_t port = 7700;
    int timeout_ms = 30000;
    serve_cmd->add_option("--host", host, "bind address");
    serve_cmd->add_option("--port", port, "bind port (0 picks one)");
    serve_cmd->add_option("--params", params_path, "params file")->required();
    serve_cmd->add_option("--dict", dict_path, "dictionary file")->required();
    serve_cmd->add_option("--fasta", fasta, "server sequence file")->required();
    serve_cmd->add_option("--id", id, "record id (default: first record)");
    serve_cmd->add_flag("--sanitize", sanitize, "drop out-of-alphabet characters");
    serve_cmd->add_option("--timeout-ms", timeout_ms, "per-session socket timeout");
    std::string serve_in;
    serve_cmd->add_option("--in", serve_in, "offline mode: request frames file");
    serve_cmd->add_option("--out", out, "offline mode: write response frames here");

    // query
    auto* query_cmd = app.add_subcommand("query", "match a sequence against a server");
    std::string pub_path, key_path, offline_in, state_path = "session.state";
    query_cmd->add_option("--host", host, "server address");
    query_cmd->add_option("--port", port, "server port");
    query_cmd->add_option("--params", params_path, "params file")->required();
    query_cmd->add_option("--dict", dict_path, "dictionary file");
    query_cmd->add_option("--fasta", fasta, "query sequence file");
    query_cmd->add_option("--id", id, "record id (default: first record)");
    query_cmd->add_flag("--sanitize", sanitize, "drop out-of-alphabet characters");
    query_cmd->add_option("--pub", pub_path, "public key file")->required();
    query_cmd->add_option("--key", key_path, "private key file")->required();
    query_cmd->add_option("--out", out, "offline mode: write request frames to this file");
    query_cmd->add_option("--in", offline_in, "offline mode: read response frames from this file");
    query_cmd->add_option("--state", state_path, "offline mode: session state file");

    // bench-corr
    auto* corr_cmd = app.add_subcommand("bench-corr", "edit-distance/Hamming correlation run");
    std::uint64_t length = 2000, seed = 1, trials = 20;
    std::string grid = "1,5,10,15,20,25,30,35,40,45,50", mix = "sub", csv_path;
    corr_cmd->add_option("--fasta", fasta, "base sequence file (default: random)");
    corr_cmd->add_option("--id", id, "record id (default: first record)");
    corr_cmd->add_flag("--sanitize", sanitize, "drop out-of-alphabet characters");
    corr_cmd->add_option("--length", length, "random base sequence length");
    corr_cmd->add_option("--seed", seed, "trial seed");
    corr_cmd->add_option("--dict", dict_path, "dictionary file (default: train on the base)");
    corr_cmd->add_option("--q-min", q_min, "minimum gram length");
    corr_cmd->add_option("--q-max", q_max, "maximum gram length");
    corr_cmd->add_option("--threshold", threshold, "minimum gram frequency");
    corr_cmd->add_option("--p", p, "Bloom filter false-positive rate");
    corr_cmd->add_option("--e-max", e_max, "tolerated edit distance");
    corr_cmd->add_option("--grid", grid, "comma-separated edit counts");
    corr_cmd->add_option("--trials", trials, "trials per edit count");
    corr_cmd->add_option("--mix", mix, "edit mix: sub or mixed")
        ->check(CLI::IsMember({"sub", "mixed"}));
    corr_cmd->add_option("--csv", csv_path, "write per-trial CSV here");

    // bench-proto
    auto* proto_cmd = app.add_subcommand("bench-proto", "end-to-end protocol benchmark");
    std::string lengths = "250,500,1000,2000";
    unsigned proto_q_min = 2, proto_q_max = 4, proto_bits = 1024;
    double proto_p = 0.5;
    std::uint32_t proto_e_max = 2;
    proto_cmd->add_option("--lengths", lengths, "comma-separated sequence lengths");
    proto_cmd->add_option("--e-max", proto_e_max, "tolerated edit distance");
    proto_cmd->add_option("--p", proto_p, "Bloom filter false-positive rate");
    proto_cmd->add_option("--q-min", proto_q_min, "minimum gram length");
    proto_cmd->add_option("--q-max", proto_q_max, "maximum gram length");
    proto_cmd->add_option("--bits", proto_bits, "modulus size")
        ->check(CLI::IsMember({1024u, 2048u, 3072u}));
    proto_cmd->add_option("--seed", seed, "data seed");

    // report
    auto* report_cmd = app.add_subcommand("report", "summarize a bench-corr CSV");
    std::string report_csv;
    report_cmd->add_option("--csv", report_csv, "CSV file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (keygen_cmd->parsed()) return cmd_keygen(bits, out, force);
        if (dict_cmd->parsed())
            return cmd_dict(fasta, sanitize, q_min, q_max, threshold, out, force);
        if (params_cmd->parsed())
            return cmd_params(dict_path, p, e_max, fasta, id, sanitize, n_v, out, force);
        if (serve_cmd->parsed())
            return cmd_serve(host, port, params_path, dict_path, fasta, id, sanitize,
                             timeout_ms, serve_in, out, force);
        if (query_cmd->parsed())
            return cmd_query(host, port, params_path, dict_path, fasta, id, sanitize, pub_path,
                             key_path, out, offline_in, state_path, force);
        if (corr_cmd->parsed())
            return cmd_bench_corr(fasta, id, sanitize, length, seed, dict_path, q_min, q_max,
                                  threshold, p, e_max, grid, trials, mix, csv_path, force);
        if (proto_cmd->parsed())
            return cmd_bench_proto(lengths, proto_e_max, proto_p, proto_q_min, proto_q_max,
                                   proto_bits, seed);
        if (report_cmd->parsed()) return cmd_report(report_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
