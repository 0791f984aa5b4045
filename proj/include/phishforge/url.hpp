#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace phishforge::url {

// Minimal RFC 3986 view of a URL. Only what the fetcher, the features and
// the detector need: scheme/host splitting, reference resolution, and
// host-equality checks.
struct Url {
    std::string scheme;    // lowercase; empty for relative references
    std::string host;      // lowercase; empty when no authority
    std::string port;      // digits, no colon; empty means scheme default
    std::string path;      // as written (after dot-segment removal on resolve)
    std::string query;     // without '?'
    std::string fragment;  // without '#'
    bool has_authority = false;
    bool has_query = false;
    bool has_fragment = false;

    bool is_http() const { return scheme == "http" || scheme == "https"; }
    std::string origin() const;           // "scheme://host[:port]"
    std::string path_with_query() const;  // "/path?query", "/" when empty
    std::string serialize() const;
};

// Generic split; never throws. Accepts relative references.
Url parse_reference(std::string_view input);

// Strict form used by the fetcher and the CLI: absolute http/https URL with
// a non-empty host. Throws InvalidUrl otherwise.
Url parse_http_url(std::string_view input);

// RFC 3986 5.2 reference resolution against an absolute base.
Url resolve(const Url& base, std::string_view reference);

// Lowercase host of an absolute http(s) URL string; nullopt for relative
// references or non-http schemes.
std::optional<std::string> http_host(std::string_view url_string);

}  // namespace phishforge::url
