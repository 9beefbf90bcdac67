#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace halluaudit::text {

// Lowercased alphanumeric tokens; everything else is a separator.
std::vector<std::string> tokenize(std::string_view s);

// tokenize() deduplicated, order preserved.
std::vector<std::string> unique_tokens(std::string_view s);

// |tokens(a) ∩ tokens(b)| / |tokens(a)|; 0 when a has no tokens.
double token_containment(std::string_view a, std::string_view b);

// |∩| / min(|a|,|b|) over unique token sets; 0 when either side is empty.
double token_overlap_min(std::string_view a, std::string_view b);

// Sentence boundaries: terminal punctuation (. ! ?) followed by whitespace
// and an uppercase letter or digit, with a short abbreviation stoplist.
std::vector<std::string> split_sentences(std::string_view s);

// Paragraphs are blocks separated by one or more blank lines.
std::vector<std::string> split_paragraphs(std::string_view s);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool starts_with_uppercase_or_digit(std::string_view s);

double cosine(std::span<const float> a, std::span<const float> b);

}  // namespace halluaudit::text
