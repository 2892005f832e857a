#pragma once

#include <functional>
#include <string>
#include <vector>

namespace weave::testing {

/// One byte-exact expectation for the child-context, payload, action or
/// answer extraction functions, with input text taken from the bundled
/// prompt transcripts.
struct TranscriptCase {
    std::string name;
    std::function<std::string()> actual;
    std::string expected;
};

std::vector<TranscriptCase> transcript_cases();

}  // namespace weave::testing
