#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asciitox {

/// Root of every typed failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ASCIITOX_DEFINE_ERROR(Name)                 \
    class Name : public Error {                     \
    public:                                         \
        using Error::Error;                         \
    }

// font_core
ASCIITOX_DEFINE_ERROR(MalformedHeader);
ASCIITOX_DEFINE_ERROR(TruncatedGlyphTable);
ASCIITOX_DEFINE_ERROR(SelfSpellingFont);
ASCIITOX_DEFINE_ERROR(NoFontsFound);
ASCIITOX_DEFINE_ERROR(FontNotFound);

// attack_synth
ASCIITOX_DEFINE_ERROR(BadToken);
ASCIITOX_DEFINE_ERROR(EmptyFiller);

// segmenter
ASCIITOX_DEFINE_ERROR(NotArt);
ASCIITOX_DEFINE_ERROR(BadVocab);

// defense
ASCIITOX_DEFINE_ERROR(NoCompatibleFont);
ASCIITOX_DEFINE_ERROR(EmptyMask);

// benchmark
ASCIITOX_DEFINE_ERROR(ExternalProtocolError);
ASCIITOX_DEFINE_ERROR(ExecutableNotFound);
ASCIITOX_DEFINE_ERROR(MissingOutcome);
ASCIITOX_DEFINE_ERROR(DuplicateOutcome);
ASCIITOX_DEFINE_ERROR(InvalidArgument);
ASCIITOX_DEFINE_ERROR(IoError);

#undef ASCIITOX_DEFINE_ERROR

/// Character with no glyph in the font being rendered.
class UnsupportedChar : public Error {
public:
    UnsupportedChar(char32_t c, const std::string& context);
    char32_t character() const noexcept { return c_; }

private:
    char32_t c_;
};

/// Dataset line that does not satisfy the JSONL schema.
class SchemaViolation : public Error {
public:
    SchemaViolation(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace asciitox
