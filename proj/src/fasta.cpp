#include "ppsm/fasta.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ppsm/errors.hpp"

namespace ppsm {

FastaResult fasta_parse(std::string_view text, std::string_view alphabet, bool sanitize) {
    FastaResult result;
    FastaRecord* current = nullptr;
    std::size_t line_no = 0;

    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '>') {
            std::string id = line.substr(1);
            // Record id is the first whitespace-delimited token.
            if (auto ws = id.find_first_of(" \t"); ws != std::string::npos) id.resize(ws);
            if (id.empty())
                throw ParseError("line " + std::to_string(line_no) + ": empty record id");
            result.records.push_back({std::move(id), {}});
            current = &result.records.back();
            continue;
        }
        if (current == nullptr)
            throw ParseError("line " + std::to_string(line_no) + ": sequence before '>' header");
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (alphabet.find(up) == std::string_view::npos) {
                if (!sanitize)
                    throw AlphabetViolation("line " + std::to_string(line_no) +
                                            ": character '" + std::string(1, c) +
                                            "' outside the alphabet");
                ++result.dropped;
                continue;
            }
            current->sequence.push_back(up);
        }
    }
    return result;
}

FastaResult fasta_read(const std::string& path, std::string_view alphabet, bool sanitize) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fasta_parse(buf.str(), alphabet, sanitize);
}

}  // namespace ppsm
