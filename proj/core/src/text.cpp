#include "halluaudit/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <unordered_set>

namespace halluaudit::text {

namespace {

bool is_word_char(unsigned char c) {
    return std::isalnum(c) != 0;
}

// Common abbreviations that a naive terminal-punctuation splitter would
// break on. Compared case-sensitively against the token ending at a '.'.
const std::unordered_set<std::string>& abbreviation_stoplist() {
    static const std::unordered_set<std::string> kList = {
        "e.g", "i.e", "etc", "vs", "cf", "Dr", "Mr", "Mrs", "Ms", "Prof",
        "Sr", "Jr", "St", "Fig", "No", "Inc", "Co", "Corp", "Ltd", "U.S",
        "U.K", "Vol", "Eq", "approx", "dept", "est",
    };
    return kList;
}

std::string word_before(std::string_view s, std::size_t dot_pos) {
    std::size_t end = dot_pos;
    std::size_t begin = end;
    while (begin > 0) {
        unsigned char c = static_cast<unsigned char>(s[begin - 1]);
        if (is_word_char(c) || c == '.') {
            --begin;
        } else {
            break;
        }
    }
    std::string w(s.substr(begin, end - begin));
    while (!w.empty() && w.back() == '.') w.pop_back();
    return w;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : s) {
        if (is_word_char(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::vector<std::string> unique_tokens(std::string_view s) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (auto& t : tokenize(s)) {
        if (seen.insert(t).second) out.push_back(t);
    }
    return out;
}

double token_containment(std::string_view a, std::string_view b) {
    auto ta = unique_tokens(a);
    if (ta.empty()) return 0.0;
    auto tb = tokenize(b);
    std::unordered_set<std::string> sb(tb.begin(), tb.end());
    std::size_t hit = 0;
    for (const auto& t : ta) {
        if (sb.count(t)) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(ta.size());
}

double token_overlap_min(std::string_view a, std::string_view b) {
    auto ta = unique_tokens(a);
    auto tb = unique_tokens(b);
    if (ta.empty() || tb.empty()) return 0.0;
    std::unordered_set<std::string> sb(tb.begin(), tb.end());
    std::size_t hit = 0;
    for (const auto& t : ta) {
        if (sb.count(t)) ++hit;
    }
    return static_cast<double>(hit) /
           static_cast<double>(std::min(ta.size(), tb.size()));
}

bool starts_with_uppercase_or_digit(std::string_view s) {
    for (unsigned char c : s) {
        if (std::isspace(c)) continue;
        if (c == '"' || c == '\'' || c == '(' || c == '[') continue;
        return std::isupper(c) != 0 || std::isdigit(c) != 0;
    }
    return false;
}

std::vector<std::string> split_sentences(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
        char c = s[i];
        if (c != '.' && c != '!' && c != '?') continue;
        // collapse runs of terminal punctuation ("?!", "...")
        std::size_t j = i;
        while (j + 1 < n && (s[j + 1] == '.' || s[j + 1] == '!' || s[j + 1] == '?')) ++j;
        if (c == '.' && j == i && abbreviation_stoplist().count(word_before(s, i))) {
            continue;
        }
        std::size_t k = j + 1;
        while (k < n && (s[k] == '"' || s[k] == '\'' || s[k] == ')')) ++k;
        bool at_end = true;
        std::size_t ws = k;
        while (ws < n && std::isspace(static_cast<unsigned char>(s[ws]))) ++ws;
        if (ws < n) {
            at_end = ws > k && starts_with_uppercase_or_digit(s.substr(ws));
        }
        if (at_end) {
            std::string sent = trim(s.substr(start, k - start));
            if (!sent.empty()) out.push_back(std::move(sent));
            start = ws;
            i = ws == 0 ? i : ws - 1;
        } else {
            i = j;
        }
    }
    std::string tail = trim(s.substr(start));
    if (!tail.empty()) out.push_back(std::move(tail));
    return out;
}

std::vector<std::string> split_paragraphs(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    std::size_t i = 0;
    auto flush = [&] {
        std::string p = trim(cur);
        if (!p.empty()) out.push_back(std::move(p));
        cur.clear();
    };
    while (i < s.size()) {
        if (s[i] == '\n') {
            std::size_t j = i;
            int newlines = 0;
            while (j < s.size() && (s[j] == '\n' || s[j] == '\r' || s[j] == ' ' || s[j] == '\t')) {
                if (s[j] == '\n') ++newlines;
                ++j;
            }
            if (newlines >= 2) {
                flush();
                i = j;
                continue;
            }
            cur.push_back(' ');
            i = j;
            continue;
        }
        cur.push_back(s[i]);
        ++i;
    }
    flush();
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double cosine(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size() || a.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace halluaudit::text
