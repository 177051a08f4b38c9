#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ppsm {

struct FastaRecord {
    std::string id;
    std::string sequence;
};

struct FastaResult {
    std::vector<FastaRecord> records;
    std::uint64_t dropped = 0;  // characters removed by sanitization
};

// Parses '>'-headed records, uppercases, strips whitespace. Characters
// outside the alphabet raise AlphabetViolation unless sanitize is set, in
// which case they are dropped and counted.
FastaResult fasta_read(const std::string& path, std::string_view alphabet = "ACGT",
                       bool sanitize = false);
FastaResult fasta_parse(std::string_view text, std::string_view alphabet = "ACGT",
                        bool sanitize = false);

}  // namespace ppsm
