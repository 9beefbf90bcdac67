#include "halluaudit/gateway.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "halluaudit/hash.hpp"
#include "halluaudit/prompt_assets.hpp"

namespace halluaudit {

using nlohmann::json;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

void GatewayConfig::apply_env() {
    if (chat_url.empty()) chat_url = env_or("HALLU_CHAT_URL", "");
    if (embed_url.empty()) embed_url = env_or("HALLU_EMBED_URL", "");
    if (rerank_url.empty()) rerank_url = env_or("HALLU_RERANK_URL", "");
    if (nli_url.empty()) nli_url = env_or("HALLU_NLI_URL", "");
    if (api_key.empty()) api_key = env_or("HALLU_API_KEY", "");
}

std::uint64_t GatewayStats::chat_calls_for(const std::string& template_id) const {
    std::lock_guard lock(mutex_);
    auto it = per_template_.find(template_id);
    return it == per_template_.end() ? 0 : it->second;
}

void GatewayStats::count_chat_template(const std::string& template_id) {
    std::lock_guard lock(mutex_);
    ++per_template_[template_id];
}

void PromptLibrary::register_template(PromptTemplate tmpl) {
    templates_[tmpl.id] = std::move(tmpl);
}

void PromptLibrary::load_overrides(const std::filesystem::path& dir) {
    if (dir.empty() || !std::filesystem::is_directory(dir)) return;
    for (auto& [id, tmpl] : templates_) {
        auto file = dir / (id + ".txt");
        if (std::filesystem::is_regular_file(file)) {
            tmpl.text = read_file(file);
        }
    }
}

const PromptTemplate& PromptLibrary::get(const std::string& id) const {
    auto it = templates_.find(id);
    if (it == templates_.end()) {
        throw TemplateError("unknown prompt template '" + id + "'");
    }
    return it->second;
}

bool PromptLibrary::contains(const std::string& id) const {
    return templates_.count(id) > 0;
}

std::map<std::string, std::string> PromptLibrary::asset_hashes() const {
    std::map<std::string, std::string> out;
    for (const auto& [id, tmpl] : templates_) {
        out[id] = hash::sha256_hex(tmpl.text);
    }
    return out;
}

std::string PromptLibrary::render(const PromptTemplate& tmpl,
                                  const std::map<std::string, std::string>& variables) {
    std::string out = tmpl.text;
    for (const auto& var : tmpl.variables) {
        auto it = variables.find(var);
        if (it == variables.end()) {
            throw TemplateError("unbound placeholder {" + var + "} in template '" +
                                tmpl.id + "'");
        }
        const std::string needle = "{" + var + "}";
        std::size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), it->second);
            pos += it->second.size();
        }
    }
    return out;
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
    auto path = dir_ / (key + ".json");
    std::lock_guard lock(mutex_);
    if (!std::filesystem::is_regular_file(path)) return std::nullopt;
    return read_file(path);
}

void ResponseCache::put(const std::string& key, const std::string& value) {
    auto path = dir_ / (key + ".json");
    auto tmp = dir_ / (key + ".tmp");
    std::lock_guard lock(mutex_);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << value;
    }
    std::filesystem::rename(tmp, path);
}

Gateway::Gateway(GatewayConfig config, PromptLibrary prompts,
                 std::shared_ptr<ChatBackend> chat, std::shared_ptr<EmbedBackend> embed,
                 std::shared_ptr<RerankBackend> rerank, std::shared_ptr<NliBackend> nli)
    : config_(std::move(config)),
      prompts_(std::move(prompts)),
      chat_(std::move(chat)),
      embed_(std::move(embed)),
      rerank_(std::move(rerank)),
      nli_(std::move(nli)) {
    if (!config_.cache_dir.empty()) {
        cache_ = std::make_unique<ResponseCache>(config_.cache_dir);
    }
}

template <typename Fn>
auto Gateway::with_retry(Fn&& fn) -> decltype(fn()) {
    int attempts = std::max(1, config_.retry.max_attempts);
    for (int attempt = 1;; ++attempt) {
        try {
            return fn();
        } catch (const TransportError&) {
            if (attempt >= attempts) throw;
            std::this_thread::sleep_for(config_.retry.backoff * attempt);
        }
    }
}

std::string Gateway::backend_ids() const {
    return "chat=" + chat_->id() + ",embed=" + embed_->id() + ",rerank=" + rerank_->id() +
           ",nli=" + nli_->id();
}

std::string Gateway::chat_rendered(const ChatRequest& request) {
    std::string key;
    if (cache_ && request.temperature == 0.0) {
        json body = {{"capability", "chat"},
                     {"backend", chat_->id()},
                     {"prompt", request.text},
                     {"temperature", request.temperature}};
        key = hash::sha256_hex(body.dump());
        if (auto hit = cache_->get(key)) {
            ++stats_.cache_hits;
            return *hit;
        }
        ++stats_.cache_misses;
    }
    std::string reply = with_retry([&] { return chat_->complete(request); });
    ++stats_.chat_calls;
    stats_.count_chat_template(request.template_id);
    if (!key.empty()) cache_->put(key, reply);
    return reply;
}

std::string Gateway::chat(const ChatCall& call) {
    const PromptTemplate& tmpl = prompts_.get(call.template_id);
    ChatRequest request{call.template_id, call.variables,
                        PromptLibrary::render(tmpl, call.variables), call.temperature};
    return chat_rendered(request);
}

std::string Gateway::chat_json(const ChatCall& call) {
    const PromptTemplate& tmpl = prompts_.get(call.template_id);
    ChatRequest request{call.template_id, call.variables,
                        PromptLibrary::render(tmpl, call.variables), call.temperature};
    std::string reply = chat_rendered(request);
    if (auto obj = extract_first_json_object(reply)) return *obj;

    ChatRequest repair = request;
    repair.text += "\n\nOutput JSON only.";
    reply = chat_rendered(repair);
    if (auto obj = extract_first_json_object(reply)) return *obj;
    throw ModelFormatError("no JSON object in reply for template '" + call.template_id + "'");
}

std::vector<EmbeddingVector> Gateway::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) {
        throw std::invalid_argument("embed: texts must be nonempty");
    }
    std::vector<EmbeddingVector> out(texts.size());
    std::vector<std::size_t> missing;
    std::vector<std::string> missing_keys(texts.size());

    if (cache_) {
        for (std::size_t i = 0; i < texts.size(); ++i) {
            json body = {{"capability", "embed"}, {"backend", embed_->id()}, {"text", texts[i]}};
            missing_keys[i] = hash::sha256_hex(body.dump());
            if (auto hit = cache_->get(missing_keys[i])) {
                ++stats_.cache_hits;
                json v = json::parse(*hit);
                out[i].values = v.get<std::vector<float>>();
            } else {
                ++stats_.cache_misses;
                missing.push_back(i);
            }
        }
    } else {
        missing.resize(texts.size());
        for (std::size_t i = 0; i < texts.size(); ++i) missing[i] = i;
    }

    if (!missing.empty()) {
        std::vector<std::string> batch;
        batch.reserve(missing.size());
        for (auto i : missing) batch.push_back(texts[i]);
        auto vectors = with_retry([&] { return embed_->embed(batch); });
        ++stats_.embed_calls;
        if (vectors.size() != batch.size()) {
            throw TransportError("embed backend returned wrong vector count");
        }
        for (std::size_t k = 0; k < missing.size(); ++k) {
            out[missing[k]] = vectors[k];
            if (cache_) {
                cache_->put(missing_keys[missing[k]], json(vectors[k].values).dump());
            }
        }
    }
    return out;
}

std::vector<double> Gateway::rerank(const std::string& query,
                                    const std::vector<std::string>& passages) {
    if (passages.empty()) {
        throw std::invalid_argument("rerank: passages must be nonempty");
    }
    std::string key;
    if (cache_) {
        json body = {{"capability", "rerank"},
                     {"backend", rerank_->id()},
                     {"query", query},
                     {"passages", passages}};
        key = hash::sha256_hex(body.dump());
        if (auto hit = cache_->get(key)) {
            ++stats_.cache_hits;
            return json::parse(*hit).get<std::vector<double>>();
        }
        ++stats_.cache_misses;
    }
    auto scores = with_retry([&] { return rerank_->rerank(query, passages); });
    ++stats_.rerank_calls;
    if (scores.size() != passages.size()) {
        throw TransportError("rerank backend returned wrong score count");
    }
    for (auto& s : scores) s = std::clamp(s, 0.0, 1.0);
    if (!key.empty()) cache_->put(key, json(scores).dump());
    return scores;
}

NliVerdict Gateway::nli(const std::string& premise, const std::string& hypothesis) {
    if (premise.empty() || hypothesis.empty()) {
        throw std::invalid_argument("nli: premise and hypothesis must be nonempty");
    }
    std::string key;
    if (cache_) {
        json body = {{"capability", "nli"},
                     {"backend", nli_->id()},
                     {"premise", premise},
                     {"hypothesis", hypothesis}};
        key = hash::sha256_hex(body.dump());
        if (auto hit = cache_->get(key)) {
            ++stats_.cache_hits;
            json v = json::parse(*hit);
            return NliVerdict{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
        }
        ++stats_.cache_misses;
    }
    NliVerdict verdict = with_retry([&] { return nli_->classify(premise, hypothesis); });
    ++stats_.nli_calls;
    double sum = verdict.p_entail + verdict.p_contradict + verdict.p_neutral;
    if (verdict.p_entail < 0 || verdict.p_contradict < 0 || verdict.p_neutral < 0 || sum <= 0) {
        throw TransportError("nli backend returned an invalid probability triple");
    }
    if (std::abs(sum - 1.0) > 1e-6) {
        verdict.p_entail /= sum;
        verdict.p_contradict /= sum;
        verdict.p_neutral /= sum;
    }
    if (!key.empty()) {
        cache_->put(key, json({verdict.p_entail, verdict.p_contradict, verdict.p_neutral}).dump());
    }
    return verdict;
}

std::optional<std::string> extract_first_json_object(const std::string& reply) {
    std::size_t start = reply.find('{');
    while (start != std::string::npos) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < reply.size(); ++i) {
            char c = reply[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (c == '\\') {
                    escaped = true;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                --depth;
                if (depth == 0) {
                    std::string candidate = reply.substr(start, i - start + 1);
                    json parsed = json::parse(candidate, nullptr, false);
                    if (!parsed.is_discarded()) return candidate;
                    break;
                }
            }
        }
        start = reply.find('{', start + 1);
    }
    return std::nullopt;
}

PromptLibrary PromptLibrary::with_defaults() {
    PromptLibrary lib;
    for (const auto& tmpl : prompt_assets::defaults()) {
        lib.register_template(tmpl);
    }
    return lib;
}

}  // namespace halluaudit
