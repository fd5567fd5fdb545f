#pragma once

#include <string>

namespace claimcheck {

// Classic Porter (1980) suffix-stripping stemmer for lowercase ASCII words.
// Words of length <= 2 and tokens containing non-letters are returned
// unchanged. Matches the reference implementation's behaviour, including the
// rule that within a step only the first matching suffix is considered even
// when its measure condition fails.
std::string porter_stem(const std::string& word);

}  // namespace claimcheck
