#pragma once

#include <stdexcept>
#include <string>

namespace ppsm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define PPSM_DEFINE_ERROR(name)                      \
    struct name : Error {                            \
        using Error::Error;                          \
    };

// gram_engine
PPSM_DEFINE_ERROR(EmptyInput)
PPSM_DEFINE_ERROR(EmptyCorpus)
PPSM_DEFINE_ERROR(PadSymbolInInput)
PPSM_DEFINE_ERROR(SeparatorInGram)

// bloom_filter
PPSM_DEFINE_ERROR(DomainError)
PPSM_DEFINE_ERROR(ParamMismatch)

// homomorphic_crypto
PPSM_DEFINE_ERROR(UnsupportedSecurityLevel)
PPSM_DEFINE_ERROR(PlaintextOutOfRange)
PPSM_DEFINE_ERROR(SchemeMismatch)
PPSM_DEFINE_ERROR(NotInvertible)

// matching_protocol
PPSM_DEFINE_ERROR(DictionaryMismatch)
PPSM_DEFINE_ERROR(FilterLengthMismatch)
PPSM_DEFINE_ERROR(SessionMismatch)
PPSM_DEFINE_ERROR(ProtocolViolation)

// plaintext_oracle
PPSM_DEFINE_ERROR(DeletionFromEmpty)

// cli_and_wire
PPSM_DEFINE_ERROR(ParseError)
PPSM_DEFINE_ERROR(AlphabetViolation)
PPSM_DEFINE_ERROR(IoError)
PPSM_DEFINE_ERROR(BindError)
PPSM_DEFINE_ERROR(ConnectionError)

#undef PPSM_DEFINE_ERROR

}  // namespace ppsm
