#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phishforge::dom {

enum class NodeKind { Document, Element, Text, Comment, Doctype };

struct Attr {
    std::string name;
    std::string value;
};

class Node {
  public:
    NodeKind kind = NodeKind::Element;
    std::string tag;                   // elements only, lowercase
    std::string data;                  // text / comment / doctype payload
    std::vector<Attr> attributes;      // document order, first-wins names
    std::vector<std::unique_ptr<Node>> children;
    Node* parent = nullptr;

    const std::string* attribute(std::string_view name) const;
    void set_attribute(std::string_view name, std::string_view value);
    bool remove_attribute(std::string_view name);

    Node& append_element(std::string_view tag);
    Node& append_text(std::string_view text);

    // Concatenated descendant text.
    std::string text_content() const;
};

// Matches elements by tag name, by attribute token, or by position among
// previous matches. Criteria compose conjunctively except position, which
// indexes into the result of the others.
class NodeSelector {
  public:
    static NodeSelector by_tag(std::string_view tag);

    NodeSelector& with_attr_contains(std::string_view attr, std::string_view token);
    NodeSelector& at_position(std::size_t index);

    bool matches(const Node& node) const;
    std::optional<std::size_t> position() const { return position_; }

  private:
    std::string tag_;
    struct AttrQuery {
        std::string name;
        std::string token;
    };
    std::vector<AttrQuery> attr_queries_;
    std::optional<std::size_t> position_;
};

class DocumentTree {
  public:
    DocumentTree();
    DocumentTree(DocumentTree&&) noexcept = default;
    DocumentTree& operator=(DocumentTree&&) noexcept = default;

    static DocumentTree parse(std::string_view html);
    std::string serialize() const;

    Node& root() { return *root_; }
    const Node& root() const { return *root_; }

    // Always present after parse; synthesized when the input lacks them.
    Node& html();
    Node& head();
    Node& body();

    std::vector<Node*> select_all(const NodeSelector& selector);
    std::vector<const Node*> select_all(const NodeSelector& selector) const;
    Node* select_first(const NodeSelector& selector);
    const Node* select_first(const NodeSelector& selector) const;

    // Appends a <style> element with the given css text to head.
    Node& inject_style(std::string_view css);

    std::size_t node_count() const;

  private:
    std::unique_ptr<Node> root_;
};

// Deep structural comparison ignoring attribute storage order.
bool structurally_equal(const Node& a, const Node& b);
bool structurally_equal(const DocumentTree& a, const DocumentTree& b);

std::string escape_text(std::string_view raw);
std::string escape_attr(std::string_view raw);
std::string decode_entities(std::string_view raw);

}  // namespace phishforge::dom
