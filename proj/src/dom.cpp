#include "phishforge/dom.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "phishforge/encoding.hpp"
#include "phishforge/errors.hpp"

namespace phishforge::dom {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

constexpr std::array<std::string_view, 14> kVoidTags = {
    "area", "base", "br",    "col",    "embed",  "hr",  "img",
    "input", "link", "meta", "param", "source", "track", "wbr"};

// Content is taken verbatim up to the matching close tag; no entity
// decoding, no escaping on output.
constexpr std::array<std::string_view, 4> kRawTextTags = {"script", "style", "textarea", "title"};

bool is_void(std::string_view tag) {
    return std::find(kVoidTags.begin(), kVoidTags.end(), tag) != kVoidTags.end();
}

bool is_rawtext(std::string_view tag) {
    return std::find(kRawTextTags.begin(), kRawTextTags.end(), tag) != kRawTextTags.end();
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

struct NamedEntity {
    std::string_view name;
    std::string_view expansion;
};

constexpr std::array<NamedEntity, 6> kEntities = {{
    {"amp", "&"},
    {"lt", "<"},
    {"gt", ">"},
    {"quot", "\""},
    {"apos", "'"},
    {"nbsp", "\xC2\xA0"},
}};

}  // namespace

std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        char c = raw[i];
        if (c != '&') {
            out += c;
            ++i;
            continue;
        }
        auto semi = raw.find(';', i + 1);
        // Only the terminated form is decoded; a bare ampersand stays put.
        if (semi == std::string_view::npos || semi == i + 1 || semi - i > 12) {
            out += c;
            ++i;
            continue;
        }
        std::string_view body = raw.substr(i + 1, semi - i - 1);
        if (body[0] == '#') {
            std::uint32_t cp = 0;
            bool ok = body.size() > 1;
            std::size_t k = 1;
            bool hex = body.size() > 2 && (body[1] == 'x' || body[1] == 'X');
            if (hex) k = 2, ok = body.size() > 2;
            for (; ok && k < body.size(); ++k) {
                auto d = static_cast<unsigned char>(body[k]);
                std::uint32_t v;
                if (std::isdigit(d)) {
                    v = static_cast<std::uint32_t>(d - '0');
                } else if (hex && std::isxdigit(d)) {
                    v = static_cast<std::uint32_t>(std::tolower(d) - 'a' + 10);
                } else {
                    ok = false;
                    break;
                }
                cp = cp * (hex ? 16 : 10) + v;
                if (cp > 0x10FFFF) cp = 0x110000;  // clamp, flagged below
            }
            if (ok) {
                if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
                append_utf8(out, cp);
                i = semi + 1;
                continue;
            }
        } else {
            auto hit = std::find_if(kEntities.begin(), kEntities.end(),
                                    [&](const NamedEntity& e) { return e.name == body; });
            if (hit != kEntities.end()) {
                out += hit->expansion;
                i = semi + 1;
                continue;
            }
        }
        out += c;
        ++i;
    }
    return out;
}

std::string escape_text(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string escape_attr(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const std::string* Node::attribute(std::string_view name) const {
    for (const auto& a : attributes) {
        if (a.name == name) return &a.value;
    }
    return nullptr;
}

void Node::set_attribute(std::string_view name, std::string_view value) {
    for (auto& a : attributes) {
        if (a.name == name) {
            a.value = value;
            return;
        }
    }
    attributes.push_back({std::string(name), std::string(value)});
}

bool Node::remove_attribute(std::string_view name) {
    auto it = std::find_if(attributes.begin(), attributes.end(),
                           [&](const Attr& a) { return a.name == name; });
    if (it == attributes.end()) return false;
    attributes.erase(it);
    return true;
}

Node& Node::append_element(std::string_view tag) {
    auto child = std::make_unique<Node>();
    child->kind = NodeKind::Element;
    child->tag = lower(tag);
    child->parent = this;
    children.push_back(std::move(child));
    return *children.back();
}

Node& Node::append_text(std::string_view text) {
    if (!children.empty() && children.back()->kind == NodeKind::Text) {
        children.back()->data += text;
        return *children.back();
    }
    auto child = std::make_unique<Node>();
    child->kind = NodeKind::Text;
    child->data = text;
    child->parent = this;
    children.push_back(std::move(child));
    return *children.back();
}

std::string Node::text_content() const {
    std::string out;
    if (kind == NodeKind::Text) out += data;
    for (const auto& c : children) out += c->text_content();
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct ParsedAttr {
    std::string name;
    std::string value;
};

struct StartTag {
    std::string tag;
    std::vector<ParsedAttr> attrs;
    bool self_closing = false;
};

class Parser {
  public:
    explicit Parser(std::string_view input) : in_(input) {
        doc_ = std::make_unique<Node>();
        doc_->kind = NodeKind::Document;
    }

    std::unique_ptr<Node> run() {
        while (pos_ < in_.size()) {
            if (in_[pos_] != '<') {
                read_text();
            } else {
                read_markup();
            }
        }
        finalize();
        return std::move(doc_);
    }

  private:
    enum class Mode { BeforeHtml, BeforeHead, InHead, AfterHead, InBody };

    std::string_view in_;
    std::size_t pos_ = 0;
    Mode mode_ = Mode::BeforeHtml;
    std::unique_ptr<Node> doc_;
    Node* html_ = nullptr;
    Node* head_ = nullptr;
    Node* body_ = nullptr;
    std::vector<Node*> stack_;  // open elements inside body

    Node* current() { return stack_.empty() ? body_ : stack_.back(); }

    void ensure_html() {
        if (html_) return;
        html_ = &doc_->append_element("html");
    }
    void ensure_head() {
        ensure_html();
        if (head_) return;
        head_ = &html_->append_element("head");
    }
    void ensure_body() {
        ensure_head();
        if (body_) return;
        body_ = &html_->append_element("body");
    }

    void finalize() {
        ensure_body();
    }

    // --- token dispatch, one method per insertion-mode concern ---

    void handle_text(std::string_view decoded) {
        while (!decoded.empty()) {
            switch (mode_) {
                case Mode::BeforeHtml:
                case Mode::BeforeHead:
                case Mode::AfterHead: {
                    std::size_t k = 0;
                    while (k < decoded.size() && is_ws(decoded[k])) ++k;
                    decoded.remove_prefix(k);
                    if (decoded.empty()) return;
                    advance_mode();
                    break;
                }
                case Mode::InHead: {
                    std::size_t k = 0;
                    while (k < decoded.size() && is_ws(decoded[k])) ++k;
                    if (k > 0) head_->append_text(decoded.substr(0, k));
                    decoded.remove_prefix(k);
                    if (decoded.empty()) return;
                    mode_ = Mode::AfterHead;
                    break;
                }
                case Mode::InBody:
                    current()->append_text(decoded);
                    return;
            }
        }
    }

    // One synthesis step toward InBody; callers loop.
    void advance_mode() {
        switch (mode_) {
            case Mode::BeforeHtml:
                ensure_html();
                mode_ = Mode::BeforeHead;
                break;
            case Mode::BeforeHead:
                ensure_head();
                mode_ = Mode::InHead;
                break;
            case Mode::InHead:
                mode_ = Mode::AfterHead;
                break;
            case Mode::AfterHead:
                ensure_body();
                mode_ = Mode::InBody;
                break;
            case Mode::InBody:
                break;
        }
    }

    void handle_comment(std::string_view data) {
        Node* target = nullptr;
        switch (mode_) {
            case Mode::BeforeHtml: target = doc_.get(); break;
            case Mode::BeforeHead:
                ensure_html();
                target = html_;
                break;
            case Mode::InHead: target = head_; break;
            case Mode::AfterHead: target = html_; break;
            case Mode::InBody: target = current(); break;
        }
        auto node = std::make_unique<Node>();
        node->kind = NodeKind::Comment;
        node->data = data;
        node->parent = target;
        target->children.push_back(std::move(node));
    }

    void handle_doctype(std::string_view data) {
        if (mode_ != Mode::BeforeHtml) return;  // late doctypes dropped
        auto node = std::make_unique<Node>();
        node->kind = NodeKind::Doctype;
        node->data = data;
        node->parent = doc_.get();
        doc_->children.push_back(std::move(node));
    }

    static bool head_tag(std::string_view tag) {
        constexpr std::array<std::string_view, 10> tags = {
            "base", "basefont", "bgsound", "link",     "meta",
            "title", "style",   "script",  "noscript", "noframes"};
        return std::find(tags.begin(), tags.end(), tag) != tags.end();
    }

    Node& insert_element(Node& parent, const StartTag& t) {
        Node& el = parent.append_element(t.tag);
        for (const auto& a : t.attrs) {
            if (!el.attribute(a.name)) el.attributes.push_back({a.name, a.value});
        }
        return el;
    }

    void handle_start(const StartTag& t) {
        switch (mode_) {
            case Mode::BeforeHtml:
                if (t.tag == "html") {
                    html_ = &insert_element(*doc_, t);
                    mode_ = Mode::BeforeHead;
                    return;
                }
                advance_mode();
                handle_start(t);
                return;
            case Mode::BeforeHead:
                if (t.tag == "html") return;
                if (t.tag == "head") {
                    ensure_html();
                    head_ = &insert_element(*html_, t);
                    mode_ = Mode::InHead;
                    return;
                }
                advance_mode();
                handle_start(t);
                return;
            case Mode::InHead:
                if (t.tag == "html" || t.tag == "head") return;
                if (head_tag(t.tag)) {
                    place(*head_, t);
                    return;
                }
                mode_ = Mode::AfterHead;
                handle_start(t);
                return;
            case Mode::AfterHead:
                if (t.tag == "html" || t.tag == "head") return;
                if (t.tag == "body") {
                    ensure_head();
                    body_ = &insert_element(*html_, t);
                    mode_ = Mode::InBody;
                    return;
                }
                advance_mode();
                handle_start(t);
                return;
            case Mode::InBody:
                if (t.tag == "html" || t.tag == "head" || t.tag == "body") return;
                place(*current(), t);
                return;
        }
    }

    // Inserts under parent, pulling rawtext content immediately so the
    // element never goes on the open stack.
    void place(Node& parent, const StartTag& t) {
        Node& el = insert_element(parent, t);
        if (is_rawtext(t.tag)) {
            std::string raw = read_rawtext(t.tag);
            if (!raw.empty()) el.append_text(raw);
            return;
        }
        if (is_void(t.tag) || t.self_closing) return;
        // head children never join the open stack; nested head content
        // flattens, which reparses to the same shape.
        if (&parent != head_) stack_.push_back(&el);
    }

    void handle_end(std::string_view tag) {
        switch (mode_) {
            case Mode::BeforeHtml:
            case Mode::BeforeHead:
            case Mode::AfterHead:
                advance_mode();
                handle_end(tag);
                return;
            case Mode::InHead:
                if (tag == "head") {
                    mode_ = Mode::AfterHead;
                    return;
                }
                if (tag == "body" || tag == "html" || tag == "br") {
                    mode_ = Mode::AfterHead;
                    handle_end(tag);
                    return;
                }
                return;  // stray end tag in head: dropped
            case Mode::InBody: {
                if (tag == "body" || tag == "html") return;
                if (is_void(tag)) return;
                for (std::size_t i = stack_.size(); i > 0; --i) {
                    if (stack_[i - 1]->tag == tag) {
                        stack_.resize(i - 1);
                        return;
                    }
                }
                return;  // unmatched end tag: dropped
            }
        }
    }

    // --- lexing ---

    void read_text() {
        auto next = in_.find('<', pos_);
        std::string_view run = in_.substr(pos_, next - pos_);
        pos_ = next == std::string_view::npos ? in_.size() : next;
        handle_text(decode_entities(run));
    }

    void read_markup() {
        // pos_ is at '<'
        if (pos_ + 1 >= in_.size()) {
            handle_text("<");
            ++pos_;
            return;
        }
        char c = in_[pos_ + 1];
        if (c == '!') {
            read_declaration();
        } else if (c == '/') {
            read_end_tag();
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            read_start_tag();
        } else if (c == '?') {
            read_bogus_comment(pos_ + 1);
        } else {
            handle_text("<");
            ++pos_;
        }
    }

    void read_declaration() {
        if (in_.compare(pos_, 4, "<!--") == 0) {
            auto end = in_.find("-->", pos_ + 4);
            if (end == std::string_view::npos) {
                handle_comment(in_.substr(pos_ + 4));
                pos_ = in_.size();
            } else {
                handle_comment(in_.substr(pos_ + 4, end - pos_ - 4));
                pos_ = end + 3;
            }
            return;
        }
        auto end = in_.find('>', pos_ + 2);
        std::string_view body = end == std::string_view::npos
                                    ? in_.substr(pos_ + 2)
                                    : in_.substr(pos_ + 2, end - pos_ - 2);
        pos_ = end == std::string_view::npos ? in_.size() : end + 1;
        if (body.size() >= 7 && lower(body.substr(0, 7)) == "doctype") {
            handle_doctype(body);
        } else {
            handle_comment(body);
        }
    }

    void read_bogus_comment(std::size_t start) {
        auto end = in_.find('>', start);
        std::string_view body = end == std::string_view::npos ? in_.substr(start)
                                                              : in_.substr(start, end - start);
        pos_ = end == std::string_view::npos ? in_.size() : end + 1;
        handle_comment(body);
    }

    void read_end_tag() {
        std::size_t p = pos_ + 2;
        if (p >= in_.size()) {
            handle_text("</");
            pos_ = in_.size();
            return;
        }
        if (in_[p] == '>') {
            pos_ = p + 1;  // "</>" vanishes
            return;
        }
        if (!std::isalpha(static_cast<unsigned char>(in_[p]))) {
            read_bogus_comment(p);
            return;
        }
        std::size_t name_end = p;
        while (name_end < in_.size() && !is_ws(in_[name_end]) && in_[name_end] != '>' &&
               in_[name_end] != '/') {
            ++name_end;
        }
        std::string tag = lower(in_.substr(p, name_end - p));
        auto gt = in_.find('>', name_end);
        pos_ = gt == std::string_view::npos ? in_.size() : gt + 1;
        handle_end(tag);
    }

    void read_start_tag() {
        std::size_t p = pos_ + 1;
        std::size_t name_end = p;
        while (name_end < in_.size() && !is_ws(in_[name_end]) && in_[name_end] != '>' &&
               in_[name_end] != '/') {
            ++name_end;
        }
        StartTag t;
        t.tag = lower(in_.substr(p, name_end - p));
        p = name_end;

        while (p < in_.size()) {
            while (p < in_.size() && is_ws(in_[p])) ++p;
            if (p >= in_.size()) break;
            if (in_[p] == '>') {
                ++p;
                break;
            }
            if (in_[p] == '/') {
                ++p;
                if (p < in_.size() && in_[p] == '>') {
                    t.self_closing = true;
                    ++p;
                    break;
                }
                continue;
            }
            // attribute name
            std::size_t ns = p;
            while (p < in_.size() && !is_ws(in_[p]) && in_[p] != '=' && in_[p] != '>' &&
                   in_[p] != '/') {
                ++p;
            }
            ParsedAttr attr;
            attr.name = lower(in_.substr(ns, p - ns));
            while (p < in_.size() && is_ws(in_[p])) ++p;
            if (p < in_.size() && in_[p] == '=') {
                ++p;
                while (p < in_.size() && is_ws(in_[p])) ++p;
                if (p < in_.size() && (in_[p] == '"' || in_[p] == '\'')) {
                    char quote = in_[p];
                    ++p;
                    std::size_t vs = p;
                    while (p < in_.size() && in_[p] != quote) ++p;
                    attr.value = decode_entities(in_.substr(vs, p - vs));
                    if (p < in_.size()) ++p;
                } else {
                    std::size_t vs = p;
                    while (p < in_.size() && !is_ws(in_[p]) && in_[p] != '>') ++p;
                    attr.value = decode_entities(in_.substr(vs, p - vs));
                }
            }
            if (!attr.name.empty()) t.attrs.push_back(std::move(attr));
        }
        pos_ = p;
        handle_start(t);
    }

    // Verbatim content up to "</tag" followed by a tag terminator.
    std::string read_rawtext(std::string_view tag) {
        std::size_t p = pos_;
        while (true) {
            auto lt = in_.find('<', p);
            if (lt == std::string_view::npos || lt + 2 + tag.size() > in_.size()) {
                std::string content(in_.substr(pos_));
                pos_ = in_.size();
                return content;
            }
            bool close = in_[lt + 1] == '/';
            for (std::size_t k = 0; close && k < tag.size(); ++k) {
                close = std::tolower(static_cast<unsigned char>(in_[lt + 2 + k])) == tag[k];
            }
            std::size_t after = lt + 2 + tag.size();
            if (close && (after >= in_.size() || is_ws(in_[after]) || in_[after] == '>' ||
                          in_[after] == '/')) {
                std::string content(in_.substr(pos_, lt - pos_));
                auto gt = in_.find('>', after);
                pos_ = gt == std::string_view::npos ? in_.size() : gt + 1;
                return content;
            }
            p = lt + 1;
        }
    }
};

void serialize_node(const Node& n, std::string& out, bool raw_parent) {
    switch (n.kind) {
        case NodeKind::Document:
            for (const auto& c : n.children) serialize_node(*c, out, false);
            return;
        case NodeKind::Doctype:
            out += "<!";
            out += n.data;
            out += ">";
            return;
        case NodeKind::Comment:
            out += "<!--";
            out += n.data;
            out += "-->";
            return;
        case NodeKind::Text:
            out += raw_parent ? n.data : escape_text(n.data);
            return;
        case NodeKind::Element: break;
    }
    out += "<";
    out += n.tag;
    for (const auto& a : n.attributes) {
        out += " ";
        out += a.name;
        if (!a.value.empty()) {
            out += "=\"";
            out += escape_attr(a.value);
            out += "\"";
        }
    }
    out += ">";
    if (is_void(n.tag)) return;
    bool raw = is_rawtext(n.tag);
    for (const auto& c : n.children) serialize_node(*c, out, raw);
    out += "</";
    out += n.tag;
    out += ">";
}

void collect_elements(Node& n, std::vector<Node*>& out) {
    if (n.kind == NodeKind::Element) out.push_back(&n);
    for (auto& c : n.children) collect_elements(*c, out);
}

std::size_t count_nodes(const Node& n) {
    std::size_t total = n.kind == NodeKind::Document ? 0 : 1;
    for (const auto& c : n.children) total += count_nodes(*c);
    return total;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    if (needle.size() > haystack.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool hit = true;
        for (std::size_t k = 0; k < needle.size(); ++k) {
            if (std::tolower(static_cast<unsigned char>(haystack[i + k])) !=
                std::tolower(static_cast<unsigned char>(needle[k]))) {
                hit = false;
                break;
            }
        }
        if (hit) return true;
    }
    return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// NodeSelector

NodeSelector NodeSelector::by_tag(std::string_view tag) {
    NodeSelector s;
    s.tag_ = lower(tag);
    return s;
}

NodeSelector& NodeSelector::with_attr_contains(std::string_view attr, std::string_view token) {
    attr_queries_.push_back({lower(attr), std::string(token)});
    return *this;
}

NodeSelector& NodeSelector::at_position(std::size_t index) {
    position_ = index;
    return *this;
}

bool NodeSelector::matches(const Node& node) const {
    if (node.kind != NodeKind::Element) return false;
    if (!tag_.empty() && node.tag != tag_) return false;
    for (const auto& q : attr_queries_) {
        const std::string* value = node.attribute(q.name);
        if (!value) return false;
        bool any = false;
        std::size_t i = 0;
        while (i < value->size()) {
            while (i < value->size() && is_ws((*value)[i])) ++i;
            std::size_t start = i;
            while (i < value->size() && !is_ws((*value)[i])) ++i;
            if (i > start && contains_ci(std::string_view(*value).substr(start, i - start),
                                         q.token)) {
                any = true;
                break;
            }
        }
        if (!any) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// DocumentTree

DocumentTree::DocumentTree() {
    root_ = Parser("").run();
}

DocumentTree DocumentTree::parse(std::string_view html) {
    if (!encoding::is_valid_utf8(html)) {
        throw InvalidEncoding("document is not valid UTF-8");
    }
    DocumentTree t;
    t.root_ = Parser(html).run();
    return t;
}

std::string DocumentTree::serialize() const {
    std::string out;
    serialize_node(*root_, out, false);
    return out;
}

Node& DocumentTree::html() {
    for (auto& c : root_->children) {
        if (c->kind == NodeKind::Element && c->tag == "html") return *c;
    }
    return root_->append_element("html");
}

Node& DocumentTree::head() {
    Node& h = html();
    for (auto& c : h.children) {
        if (c->kind == NodeKind::Element && c->tag == "head") return *c;
    }
    return h.append_element("head");
}

Node& DocumentTree::body() {
    Node& h = html();
    for (auto& c : h.children) {
        if (c->kind == NodeKind::Element && c->tag == "body") return *c;
    }
    return h.append_element("body");
}

std::vector<Node*> DocumentTree::select_all(const NodeSelector& selector) {
    std::vector<Node*> elements;
    collect_elements(*root_, elements);
    std::vector<Node*> matched;
    for (Node* n : elements) {
        if (selector.matches(*n)) matched.push_back(n);
    }
    if (selector.position()) {
        std::size_t idx = *selector.position();
        if (idx >= matched.size()) return {};
        return {matched[idx]};
    }
    return matched;
}

std::vector<const Node*> DocumentTree::select_all(const NodeSelector& selector) const {
    auto matched = const_cast<DocumentTree*>(this)->select_all(selector);
    return {matched.begin(), matched.end()};
}

Node* DocumentTree::select_first(const NodeSelector& selector) {
    auto all = select_all(selector);
    return all.empty() ? nullptr : all.front();
}

const Node* DocumentTree::select_first(const NodeSelector& selector) const {
    auto all = select_all(selector);
    return all.empty() ? nullptr : all.front();
}

Node& DocumentTree::inject_style(std::string_view css) {
    Node& style = head().append_element("style");
    auto text = std::make_unique<Node>();
    text->kind = NodeKind::Text;
    text->data = css;
    text->parent = &style;
    style.children.push_back(std::move(text));
    return style;
}

std::size_t DocumentTree::node_count() const {
    return count_nodes(*root_);
}

bool structurally_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.tag != b.tag || a.data != b.data) return false;
    if (a.attributes.size() != b.attributes.size()) return false;
    for (const auto& attr : a.attributes) {
        const std::string* other = b.attribute(attr.name);
        if (!other || *other != attr.value) return false;
    }
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!structurally_equal(*a.children[i], *b.children[i])) return false;
    }
    return true;
}

bool structurally_equal(const DocumentTree& a, const DocumentTree& b) {
    return structurally_equal(a.root(), b.root());
}

}  // namespace phishforge::dom
