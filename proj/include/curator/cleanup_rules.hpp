#pragma once

#include <optional>

#include "curator/document.hpp"
#include "curator/lang_detect.hpp"

namespace curator {

struct RuleOutcome {
    bool keep = true;
    std::optional<DropReason> reason;
};

// Rule-based drops, applied in fixed precedence: language, short, javascript.
//   - drop when the verdict names a language other than "en" (confidence-0
//     verdicts never fire this rule; the short rule catches every text that
//     small);
//   - drop when char_count < 512;
//   - drop when the text contains "javascript" (case-insensitive) and
//     char_count < 256. Subsumed by the short rule; kept as a separate check
//     so the rule table reads the same as it is configured.
// Pure function of (doc.text, doc.char_count, verdict).
RuleOutcome apply_rules(const Document& doc, const LanguageVerdict& verdict);

}  // namespace curator
