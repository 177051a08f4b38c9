#include "ppsm/gram.hpp"

#include <algorithm>
#include <functional>

#include "ppsm/errors.hpp"

namespace ppsm {

namespace {
constexpr char kMagic[4] = {'P', 'P', 'G', 'D'};
}

void GramConfig::validate() const {
    if (q_min < 1 || q_min > q_max)
        throw DomainError("gram config requires 1 <= q_min <= q_max");
    if (pad_head == pad_tail)
        throw DomainError("pad symbols must differ");
    if (pad_head == kGramSeparator || pad_tail == kGramSeparator)
        throw DomainError("pad symbols must not be the gram separator");
}

std::string extend(std::string_view s, const GramConfig& cfg) {
    cfg.validate();
    if (s.empty()) throw EmptyInput("extend: empty string");
    if (s.find(cfg.pad_head) != std::string_view::npos ||
        s.find(cfg.pad_tail) != std::string_view::npos)
        throw PadSymbolInInput("input contains a pad symbol");
    std::string out;
    std::size_t pad = cfg.q_min - 1;
    out.reserve(s.size() + 2 * pad);
    out.append(pad, cfg.pad_head);
    out.append(s);
    out.append(pad, cfg.pad_tail);
    return out;
}

std::string encode_gram(std::uint64_t position, std::string_view gram, bool positional) {
    if (gram.empty()) throw EmptyInput("encode_gram: empty gram");
    if (gram.find(kGramSeparator) != std::string_view::npos)
        throw SeparatorInGram("gram contains the position separator");
    if (!positional) return std::string(gram);
    std::string out = std::to_string(position);
    out.push_back(kGramSeparator);
    out.append(gram);
    return out;
}

GramDictionary GramDictionary::build(std::span<const std::string> corpus,
                                     const GramConfig& cfg,
                                     std::uint64_t prune_threshold) {
    cfg.validate();
    if (corpus.empty()) throw EmptyCorpus("dictionary corpus is empty");
    if (prune_threshold < 1) throw DomainError("prune threshold must be >= 1");

    GramDictionary dict;
    dict.cfg_ = cfg;

    // Order-independent corpus digest: hash the sorted strings.
    {
        std::vector<std::string> sorted(corpus.begin(), corpus.end());
        std::sort(sorted.begin(), sorted.end());
        ByteWriter w;
        for (const auto& s : sorted) {
            w.u64(s.size());
            w.raw(s);
        }
        dict.corpus_digest_ = sha256(w.bytes());
    }

    for (const auto& s : corpus) {
        std::string ext = extend(s, cfg);
        for (std::size_t i = 0; i + cfg.q_min <= ext.size(); ++i) {
            Node* node = dict.root_.get();
            std::size_t max_len = std::min<std::size_t>(cfg.q_max, ext.size() - i);
            for (std::size_t d = 0; d < max_len; ++d) {
                auto key = static_cast<std::uint8_t>(ext[i + d]);
                auto& child = node->next[key];
                if (!child) child = std::make_unique<Node>();
                node = child.get();
                ++node->count;
            }
        }
    }

    dict.prune(*dict.root_, 0, prune_threshold);
    return dict;
}

// Removes grams below the count threshold together with their extensions,
// which also restores prefix closure.
void GramDictionary::prune(Node& node, std::size_t depth, std::uint64_t threshold) {
    for (auto it = node.next.begin(); it != node.next.end();) {
        Node& child = *it->second;
        if (depth + 1 >= cfg_.q_min && child.count < threshold) {
            it = node.next.erase(it);
        } else {
            prune(child, depth + 1, threshold);
            // Drop structural nodes that no longer lead anywhere.
            if (depth + 1 < cfg_.q_min && child.next.empty())
                it = node.next.erase(it);
            else
                ++it;
        }
    }
}

const GramDictionary::Node* GramDictionary::walk(std::string_view gram) const {
    const Node* node = root_.get();
    for (char c : gram) {
        auto it = node->next.find(static_cast<std::uint8_t>(c));
        if (it == node->next.end()) return nullptr;
        node = it->second.get();
    }
    return node;
}

bool GramDictionary::contains(std::string_view gram) const {
    if (gram.size() < cfg_.q_min || gram.size() > cfg_.q_max) return false;
    const Node* node = walk(gram);
    return node != nullptr && node->count > 0;
}

std::uint64_t GramDictionary::count(std::string_view gram) const {
    if (!contains(gram)) return 0;
    return walk(gram)->count;
}

std::uint64_t GramDictionary::size() const {
    std::uint64_t n = 0;
    std::function<void(const Node&, std::size_t)> dfs = [&](const Node& node, std::size_t depth) {
        if (depth >= cfg_.q_min && node.count > 0) ++n;
        for (const auto& [key, child] : node.next) dfs(*child, depth + 1);
    };
    dfs(*root_, 0);
    return n;
}

std::size_t GramDictionary::longest_match(std::string_view extended, std::size_t pos) const {
    const Node* node = root_.get();
    std::size_t best = 0;
    std::size_t limit = std::min<std::size_t>(cfg_.q_max, extended.size() - pos);
    for (std::size_t d = 0; d < limit; ++d) {
        auto it = node->next.find(static_cast<std::uint8_t>(extended[pos + d]));
        if (it == node->next.end()) break;
        node = it->second.get();
        if (d + 1 >= cfg_.q_min && node->count > 0) best = d + 1;
    }
    return best;
}

std::vector<std::pair<std::string, std::uint64_t>> GramDictionary::entries() const {
    std::vector<std::pair<std::string, std::uint64_t>> out;
    std::string path;
    std::function<void(const Node&)> dfs = [&](const Node& node) {
        if (path.size() >= cfg_.q_min && node.count > 0) out.emplace_back(path, node.count);
        for (const auto& [key, child] : node.next) {
            path.push_back(static_cast<char>(key));
            dfs(*child);
            path.pop_back();
        }
    };
    dfs(*root_);
    return out;
}

Bytes GramDictionary::serialize() const {
    ByteWriter w;
    w.raw(std::string_view(kMagic, 4));
    w.u16(version_);
    w.u8(cfg_.q_min);
    w.u8(cfg_.q_max);
    w.u8(cfg_.positional ? 1 : 0);
    w.raw(std::span<const std::uint8_t>(corpus_digest_.data(), corpus_digest_.size()));
    auto ents = entries();
    w.u64(ents.size());
    for (const auto& [gram, count] : ents) {
        w.u16(static_cast<std::uint16_t>(gram.size()));
        w.raw(gram);
        w.u64(count);
    }
    return w.take();
}

void GramDictionary::insert_entry(std::string_view gram, std::uint64_t count) {
    Node* node = root_.get();
    for (char c : gram) {
        auto& child = node->next[static_cast<std::uint8_t>(c)];
        if (!child) child = std::make_unique<Node>();
        node = child.get();
    }
    node->count = count;
}

GramDictionary GramDictionary::deserialize(std::span<const std::uint8_t> data) {
    ByteReader r(data);
    auto magic = r.raw(4);
    if (std::string_view(reinterpret_cast<const char*>(magic.data()), 4) !=
        std::string_view(kMagic, 4))
        throw ParseError("bad dictionary magic");
    GramDictionary dict;
    dict.version_ = r.u16();
    dict.cfg_.q_min = r.u8();
    dict.cfg_.q_max = r.u8();
    dict.cfg_.positional = r.u8() != 0;
    dict.cfg_.validate();
    auto digest = r.raw(32);
    std::copy(digest.begin(), digest.end(), dict.corpus_digest_.begin());
    std::uint64_t n = r.u64();
    std::string prev;
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint16_t len = r.u16();
        auto bytes = r.raw(len);
        std::string gram(bytes.begin(), bytes.end());
        if (gram.size() < dict.cfg_.q_min || gram.size() > dict.cfg_.q_max)
            throw ParseError("dictionary gram length out of range");
        if (i > 0 && !(prev < gram)) throw ParseError("dictionary entries not sorted");
        dict.insert_entry(gram, r.u64());
        prev = std::move(gram);
    }
    r.expect_end();
    return dict;
}

Digest256 GramDictionary::digest() const { return sha256(serialize()); }

GramSet segment(std::string_view s, const GramDictionary& dict) {
    const GramConfig& cfg = dict.config();
    std::string ext = extend(s, cfg);
    GramSet out;
    for (std::size_t i = 0; i + cfg.q_min <= ext.size(); ++i) {
        std::size_t len = dict.longest_match(ext, i);
        if (len == 0) len = cfg.q_min;  // raw q_min-gram fallback
        out.elements.insert(
            encode_gram(i + 1, std::string_view(ext).substr(i, len), cfg.positional));
    }
    out.n_v = out.elements.size();
    return out;
}

std::uint64_t nag_bound(std::uint64_t e, std::uint8_t q_max) {
    return e * (2 * static_cast<std::uint64_t>(q_max) - 1);
}

std::uint64_t nag(std::string_view, std::uint64_t e, const GramDictionary& dict) {
    return nag_bound(e, dict.config().q_max);
}

}  // namespace ppsm
