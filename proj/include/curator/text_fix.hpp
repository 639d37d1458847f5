#pragma once

#include <string>
#include <string_view>

namespace curator {

// Unicode repair. Applies an ordered rule table until a fixpoint is reached:
//   1. mojibake repair: code-point sequences that are byte-wise a valid
//      UTF-8 encoding read through latin-1/cp1252 are re-decoded
//      ("ÃƒÂ©" -> "Ã©" -> "é");
//   2. control-character stripping: C0 controls except \n and \t, DEL,
//      and C1 controls are removed;
//   3. composition over a bundled table of Latin precomposed forms
//      (combining grave/acute/circumflex/tilde/diaeresis/ring/cedilla/caron
//      after their usual base letters).
// Total and idempotent: fix_text(fix_text(x)) == fix_text(x).
std::string fix_text(std::string_view text);

// Individual rules, exposed for tests.
std::string repair_mojibake(std::string_view text);
std::string strip_controls(std::string_view text);
std::string compose_latin(std::string_view text);

}  // namespace curator
