#pragma once

#include <string>
#include <string_view>

namespace phishforge::encoding {

// Strict RFC 3629 validation: rejects overlongs, surrogates, > U+10FFFF.
bool is_valid_utf8(std::string_view bytes);

// Byte-preserving reinterpretation: byte b becomes code point U+00b.
std::string latin1_to_utf8(std::string_view bytes);

// Lowercased charset name from a Content-Type header value or, failing
// that, from a <meta charset=...> scan of the first 1024 bytes. Empty when
// nothing is declared.
std::string sniff_charset(std::string_view body, std::string_view content_type);

// Canonicalizes page bytes to UTF-8: declared charset when supported,
// otherwise keep valid UTF-8 as-is, otherwise fall back to latin-1.
std::string to_utf8(std::string_view body, std::string_view declared_charset);

}  // namespace phishforge::encoding
