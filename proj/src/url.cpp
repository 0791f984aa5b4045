#include "phishforge/url.hpp"

#include <algorithm>
#include <cctype>

#include "phishforge/errors.hpp"

namespace phishforge::url {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_scheme_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

bool is_scheme_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '+' || c == '-' || c == '.';
}

// RFC 3986 5.2.4.
std::string remove_dot_segments(std::string_view path) {
    std::string input(path);
    std::string output;
    while (!input.empty()) {
        if (input.starts_with("../")) {
            input.erase(0, 3);
        } else if (input.starts_with("./")) {
            input.erase(0, 2);
        } else if (input.starts_with("/./")) {
            input.erase(0, 2);
        } else if (input == "/.") {
            input = "/";
        } else if (input.starts_with("/../")) {
            input.erase(0, 3);
            auto slash = output.find_last_of('/');
            output.erase(slash == std::string::npos ? 0 : slash);
        } else if (input == "/..") {
            input = "/";
            auto slash = output.find_last_of('/');
            output.erase(slash == std::string::npos ? 0 : slash);
        } else if (input == "." || input == "..") {
            input.clear();
        } else {
            auto next = input.find('/', input.front() == '/' ? 1 : 0);
            output += input.substr(0, next);
            input.erase(0, next);
        }
    }
    return output;
}

// "host:port" or "host"; IPv6 brackets kept with the host.
void split_authority(std::string_view authority, Url& out) {
    // Strip userinfo; the fetcher never sends credentials but parsing
    // should not choke on them.
    if (auto at = authority.find('@'); at != std::string_view::npos) {
        authority.remove_prefix(at + 1);
    }
    if (authority.starts_with('[')) {
        auto close = authority.find(']');
        if (close == std::string_view::npos) {
            out.host = lower(authority);
            return;
        }
        out.host = lower(authority.substr(0, close + 1));
        authority.remove_prefix(close + 1);
        if (authority.starts_with(':')) out.port = authority.substr(1);
        return;
    }
    auto colon = authority.rfind(':');
    if (colon == std::string_view::npos) {
        out.host = lower(authority);
    } else {
        out.host = lower(authority.substr(0, colon));
        out.port = authority.substr(colon + 1);
    }
}

std::string default_port(std::string_view scheme) {
    if (scheme == "http") return "80";
    if (scheme == "https") return "443";
    return "";
}

}  // namespace

std::string Url::origin() const {
    std::string out = scheme + "://" + host;
    if (!port.empty() && port != default_port(scheme)) out += ":" + port;
    return out;
}

std::string Url::path_with_query() const {
    std::string out = path.empty() ? "/" : path;
    if (has_query) out += "?" + query;
    return out;
}

std::string Url::serialize() const {
    std::string out;
    if (!scheme.empty()) out += scheme + ":";
    if (has_authority) out += "//" + host + (port.empty() ? "" : ":" + port);
    out += path;
    if (has_query) out += "?" + query;
    if (has_fragment) out += "#" + fragment;
    return out;
}

Url parse_reference(std::string_view input) {
    Url out;

    if (auto hash = input.find('#'); hash != std::string_view::npos) {
        out.has_fragment = true;
        out.fragment = input.substr(hash + 1);
        input = input.substr(0, hash);
    }
    if (auto q = input.find('?'); q != std::string_view::npos) {
        out.has_query = true;
        out.query = input.substr(q + 1);
        input = input.substr(0, q);
    }

    auto colon = input.find(':');
    if (colon != std::string_view::npos && colon > 0 && is_scheme_start(input[0]) &&
        std::all_of(input.begin(), input.begin() + static_cast<long>(colon), is_scheme_char)) {
        out.scheme = lower(input.substr(0, colon));
        input.remove_prefix(colon + 1);
    }

    if (input.starts_with("//")) {
        out.has_authority = true;
        input.remove_prefix(2);
        auto end = input.find('/');
        split_authority(input.substr(0, end), out);
        input = end == std::string_view::npos ? std::string_view{} : input.substr(end);
    }

    out.path = input;
    return out;
}

Url parse_http_url(std::string_view input) {
    Url out = parse_reference(input);
    if (!out.is_http()) throw InvalidUrl("not an http(s) URL: " + std::string(input));
    if (!out.has_authority || out.host.empty()) {
        throw InvalidUrl("missing host: " + std::string(input));
    }
    if (!out.port.empty() &&
        !std::all_of(out.port.begin(), out.port.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; })) {
        throw InvalidUrl("bad port: " + std::string(input));
    }
    if (out.path.empty()) out.path = "/";
    return out;
}

Url resolve(const Url& base, std::string_view reference) {
    Url ref = parse_reference(reference);
    Url out;

    if (!ref.scheme.empty()) {
        out = ref;
        out.path = remove_dot_segments(ref.path);
        return out;
    }
    out.scheme = base.scheme;
    if (ref.has_authority) {
        out.has_authority = true;
        out.host = ref.host;
        out.port = ref.port;
        out.path = remove_dot_segments(ref.path);
        out.has_query = ref.has_query;
        out.query = ref.query;
    } else {
        out.has_authority = base.has_authority;
        out.host = base.host;
        out.port = base.port;
        if (ref.path.empty()) {
            out.path = base.path;
            out.has_query = ref.has_query ? true : base.has_query;
            out.query = ref.has_query ? ref.query : base.query;
        } else {
            if (ref.path.starts_with('/')) {
                out.path = remove_dot_segments(ref.path);
            } else if (base.has_authority && base.path.empty()) {
                out.path = remove_dot_segments("/" + std::string(ref.path));
            } else {
                auto slash = base.path.find_last_of('/');
                std::string merged =
                    slash == std::string::npos ? "" : base.path.substr(0, slash + 1);
                out.path = remove_dot_segments(merged + std::string(ref.path));
            }
            out.has_query = ref.has_query;
            out.query = ref.query;
        }
    }
    out.has_fragment = ref.has_fragment;
    out.fragment = ref.fragment;
    return out;
}

std::optional<std::string> http_host(std::string_view url_string) {
    Url u = parse_reference(url_string);
    if (!u.is_http() || u.host.empty()) return std::nullopt;
    return u.host;
}

}  // namespace phishforge::url
