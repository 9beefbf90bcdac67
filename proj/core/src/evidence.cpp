#include "halluaudit/evidence.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "halluaudit/text.hpp"

namespace halluaudit {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "embedding persistence assumes a little-endian host");

std::vector<EvidenceChunk> chunk_document(const RetrievedDocument& doc,
                                          const RetrievalConfig& cfg,
                                          const std::string& chunk_id_prefix) {
    std::vector<EvidenceChunk> out;
    if (doc.content.empty()) return out;
    std::vector<std::string> sentences = text::split_sentences(doc.content);
    if (sentences.empty()) return out;

    const int window = std::max(1, cfg.chunk_sentences);
    for (std::size_t start = 0; start < sentences.size(); start += window) {
        std::size_t end = std::min(start + window, sentences.size());
        std::string body;
        for (std::size_t i = start; i < end; ++i) {
            if (!body.empty()) body.push_back(' ');
            body += sentences[i];
        }
        EvidenceChunk chunk;
        chunk.chunk_id = chunk_id_prefix + ":s" + std::to_string(start + 1);
        chunk.doc_url = doc.url;
        chunk.loop_index = doc.loop_index;
        chunk.span_start = static_cast<int>(start + 1);
        chunk.span_end = static_cast<int>(end);
        chunk.text = std::move(body);
        out.push_back(std::move(chunk));
    }
    return out;
}

void ChunkIndex::build(std::vector<EvidenceChunk> chunks, Gateway& gateway) {
    chunks_ = std::move(chunks);
    embeddings_.clear();
    by_id_.clear();
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        by_id_[chunks_[i].chunk_id] = i;
    }
    if (chunks_.empty()) return;
    std::vector<std::string> texts;
    texts.reserve(chunks_.size());
    for (const auto& c : chunks_) texts.push_back(c.text);
    embeddings_ = gateway.embed(texts);
}

const EvidenceChunk* ChunkIndex::find(const std::string& chunk_id) const {
    auto it = by_id_.find(chunk_id);
    return it == by_id_.end() ? nullptr : &chunks_[it->second];
}

const EmbeddingVector* ChunkIndex::embedding_of(const std::string& chunk_id) const {
    auto it = by_id_.find(chunk_id);
    return it == by_id_.end() ? nullptr : &embeddings_[it->second];
}

std::vector<ChunkIndex::Hit> ChunkIndex::cosine_scan(const EmbeddingVector& query_vector,
                                                     const std::set<std::string>& scope,
                                                     double floor) const {
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        if (!scope.empty() && !scope.count(chunks_[i].doc_url)) continue;
        double sim = text::cosine(query_vector.values, embeddings_[i].values);
        if (sim >= floor) hits.push_back({i, sim});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return a.cosine > b.cosine;
    });
    return hits;
}

void ChunkIndex::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    json manifest;
    manifest["schema_version"] = "1";
    manifest["dimension"] = embeddings_.empty() ? 0 : embeddings_.front().dimension();
    manifest["chunks"] = json::array();
    for (const auto& c : chunks_) {
        manifest["chunks"].push_back({{"chunk_id", c.chunk_id},
                                      {"doc_url", c.doc_url},
                                      {"loop_index", c.loop_index},
                                      {"span_start", c.span_start},
                                      {"span_end", c.span_end},
                                      {"text", c.text}});
    }
    {
        std::ofstream out(dir / "manifest.json", std::ios::trunc);
        out << manifest.dump(2) << "\n";
    }
    std::ofstream bin(dir / "embeddings.f32", std::ios::binary | std::ios::trunc);
    for (const auto& e : embeddings_) {
        bin.write(reinterpret_cast<const char*>(e.values.data()),
                  static_cast<std::streamsize>(e.values.size() * sizeof(float)));
    }
}

ChunkIndex ChunkIndex::load(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    json manifest = json::parse(in, nullptr, false);
    if (manifest.is_discarded()) {
        throw FormatError("unreadable index manifest in " + dir.string());
    }
    ChunkIndex index;
    for (const auto& jc : manifest.at("chunks")) {
        EvidenceChunk c;
        c.chunk_id = jc.at("chunk_id").get<std::string>();
        c.doc_url = jc.at("doc_url").get<std::string>();
        c.loop_index = jc.at("loop_index").get<int>();
        c.span_start = jc.at("span_start").get<int>();
        c.span_end = jc.at("span_end").get<int>();
        c.text = jc.at("text").get<std::string>();
        index.by_id_[c.chunk_id] = index.chunks_.size();
        index.chunks_.push_back(std::move(c));
    }
    std::size_t dim = manifest.at("dimension").get<std::size_t>();
    std::ifstream bin(dir / "embeddings.f32", std::ios::binary);
    for (std::size_t i = 0; i < index.chunks_.size(); ++i) {
        EmbeddingVector v;
        v.values.resize(dim);
        bin.read(reinterpret_cast<char*>(v.values.data()),
                 static_cast<std::streamsize>(dim * sizeof(float)));
        if (!bin) throw FormatError("embeddings file truncated in " + dir.string());
        index.embeddings_.push_back(std::move(v));
    }
    return index;
}

RankedEvidence retrieve_evidence(const AtomicClaim& claim, const ChunkIndex& index,
                                 const std::set<std::string>& scope,
                                 const RetrievalConfig& cfg, Gateway& gateway) {
    RankedEvidence out;
    out.claim_id = claim.id;
    if (scope.empty() || index.chunks().empty()) return out;

    EmbeddingVector query_vector = gateway.embed({claim.text}).front();
    auto hits = index.cosine_scan(query_vector, scope, cfg.sim_threshold);
    if (hits.empty()) return out;

    std::vector<std::string> passages;
    passages.reserve(hits.size());
    for (const auto& h : hits) passages.push_back(index.chunks()[h.index].text);
    std::vector<double> scores = gateway.rerank(claim.text, passages);

    std::vector<std::size_t> order(hits.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    std::size_t keep = std::min<std::size_t>(order.size(), std::max(1, cfg.verify_top_k));
    for (std::size_t i = 0; i < keep; ++i) {
        std::size_t h = order[i];
        out.candidates.push_back({index.chunks()[hits[h].index].chunk_id, scores[h]});
    }
    return out;
}

void ChunkMemory::add(const std::string& chunk_id, const std::string& claim_id) {
    auto [it, inserted] = back_refs_.try_emplace(chunk_id);
    if (inserted) order_.push_back(chunk_id);
    auto& refs = it->second;
    if (std::find(refs.begin(), refs.end(), claim_id) == refs.end()) {
        refs.push_back(claim_id);
    }
}

bool ChunkMemory::contains(const std::string& chunk_id) const {
    return back_refs_.count(chunk_id) > 0;
}

const std::vector<std::string>& ChunkMemory::supported_claims(const std::string& chunk_id) const {
    static const std::vector<std::string> kEmpty;
    auto it = back_refs_.find(chunk_id);
    return it == back_refs_.end() ? kEmpty : it->second;
}

void ClaimMemory::add(StoredClaim claim) {
    if (!ids_.insert(claim.id).second) {
        throw DuplicateClaimIdError(claim.id);
    }
    claims_.push_back(std::move(claim));
}

bool ClaimMemory::contains(const std::string& id) const { return ids_.count(id) > 0; }

void record_supported(const AtomicClaim& claim, const std::vector<std::string>& chunk_ids,
                      int loop_index, bool misattributed, const ChunkIndex& index,
                      Gateway& gateway, ClaimMemory& claim_memory, ChunkMemory& chunk_memory) {
    StoredClaim stored;
    stored.id = claim.id;
    stored.text = claim.text;
    stored.loop_index = loop_index;
    stored.misattributed = misattributed;
    stored.embedding = gateway.embed({claim.text}).front();
    claim_memory.add(std::move(stored));
    for (const auto& chunk_id : chunk_ids) {
        if (index.find(chunk_id) == nullptr) {
            throw InternalInvariantError("unknown chunk id recorded: " + chunk_id);
        }
        chunk_memory.add(chunk_id, claim.id);
    }
}

std::vector<StoredClaim> retrieve_prior_claims(const std::string& query_text,
                                               const ClaimMemory& memory, Gateway& gateway,
                                               int top_k) {
    std::vector<StoredClaim> out;
    if (memory.size() == 0) return out;
    EmbeddingVector query_vector = gateway.embed({query_text}).front();
    std::vector<std::pair<double, std::size_t>> scored;
    const auto& claims = memory.claims();
    for (std::size_t i = 0; i < claims.size(); ++i) {
        scored.emplace_back(text::cosine(query_vector.values, claims[i].embedding.values), i);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.first > b.first;
    });
    std::size_t keep = std::min<std::size_t>(scored.size(), std::max(1, top_k));
    for (std::size_t i = 0; i < keep; ++i) {
        out.push_back(claims[scored[i].second]);
    }
    return out;
}

}  // namespace halluaudit
