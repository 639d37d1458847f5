#include "curator/cleanup_rules.hpp"

#include <algorithm>
#include <string_view>

namespace curator {

namespace {

bool contains_ci(std::string_view haystack, std::string_view lowered_needle) {
    if (lowered_needle.empty()) return true;
    const auto lower = [](char c) {
        return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    };
    const auto it = std::search(
        haystack.begin(), haystack.end(), lowered_needle.begin(),
        lowered_needle.end(),
        [&](char a, char b) { return lower(a) == b; });
    return it != haystack.end();
}

}  // namespace

RuleOutcome apply_rules(const Document& doc, const LanguageVerdict& verdict) {
    if (verdict.confidence > 0.0 && verdict.language != "en") {
        return {false, DropReason::kLanguage};
    }
    if (doc.char_count < 512) {
        return {false, DropReason::kShort};
    }
    if (doc.char_count < 256 && contains_ci(doc.text, "javascript")) {
        return {false, DropReason::kJavascript};
    }
    return {true, std::nullopt};
}

}  // namespace curator
