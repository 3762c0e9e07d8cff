#include <cctype>
#include <string>

#include "epsdist/errors.hpp"
#include "epsdist/formula.hpp"

namespace epsdist {

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  bool peek(std::string_view tok) {
    skip_ws();
    return text_.substr(pos_, tok.size()) == tok;
  }
  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  /// Accepts a keyword only when not followed by an identifier character.
  bool accept_word(std::string_view word) {
    if (!peek(word)) return false;
    const auto end = pos_ + word.size();
    if (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) != 0 || text_[end] == '_')) {
      return false;
    }
    pos_ = end;
    return true;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  /// Modality name up to `stop` at bracket depth 0.
  ModalityId modality(std::string_view stop) {
    skip_ws();
    const auto start = pos_;
    int depth = 0;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (depth == 0 && text_.substr(pos_, stop.size()) == stop) break;
      if (c == '[') ++depth;
      if (c == ']') --depth;
      ++pos_;
    }
    if (pos_ >= text_.size()) {
      pos_ = start;
      fail("unterminated modality");
    }
    auto name = text_.substr(start, pos_ - start);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.remove_suffix(1);
    try {
      return parse_modality(name);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), start);
    }
  }

  Value value() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '.' ||
            text_[pos_] == '/')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a value");
    const auto literal = text_.substr(start, pos_ - start);
    try {
      return Value::parse(literal);
    } catch (const ParseError& e) {
      const std::string what = e.what();
      if (what.find("outside [0,1]") != std::string::npos) {
        throw ParseError("threshold '" + std::string(literal) + "' outside [0,1]", start);
      }
      throw ParseError(what, start);
    }
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser2 {
 public:
  Parser2(Dag2& dag, std::string_view text) : dag_(dag), in_(text) {}

  NodeId run() {
    const auto root = prefix();
    if (!in_.at_end()) in_.fail("unexpected trailing input");
    return root;
  }

 private:
  NodeId prefix() {
    if (in_.accept_word("tt")) return dag_.top();
    if (in_.accept_word("ff")) return dag_.bot();
    if (in_.accept("[")) {
      const auto m = in_.modality(">=");
      in_.expect(">=");
      const auto q = in_.value();
      in_.expect("]");
      return dag_.mod(m, q, prefix());
    }
    if (in_.accept("(")) {
      const auto l = prefix();
      NodeId out = l;
      if (in_.accept("&")) {
        out = dag_.conj(l, prefix());
      } else if (in_.accept("|")) {
        out = dag_.disj(l, prefix());
      }
      in_.expect(")");
      return out;
    }
    in_.fail("expected a formula");
  }

  Dag2& dag_;
  Cursor in_;
};

class ParserQ {
 public:
  ParserQ(DagQ& dag, std::string_view text) : dag_(dag), in_(text) {}

  NodeId run() {
    const auto root = expr();
    if (!in_.at_end()) in_.fail("unexpected trailing input");
    return root;
  }

 private:
  NodeId expr() {
    auto acc = prefix();
    while (true) {
      if (in_.accept("(+)")) {
        acc = dag_.shift_up(acc, in_.value());
      } else if (in_.accept("(-)")) {
        acc = dag_.shift_down(acc, in_.value());
      } else {
        return acc;
      }
    }
  }

  NodeId prefix() {
    if (in_.accept_word("tt")) return dag_.top();
    if (in_.accept_word("ff")) return dag_.bot();
    if (in_.accept("<")) {
      const auto m = in_.modality(">");
      in_.expect(">");
      return dag_.sugeno(m, prefix());
    }
    if (!in_.peek("(+)") && !in_.peek("(-)") && in_.accept("(")) {
      const auto l = expr();
      NodeId out = l;
      if (in_.accept("&")) {
        out = dag_.conj(l, expr());
      } else if (in_.accept("|")) {
        out = dag_.disj(l, expr());
      }
      in_.expect(")");
      return out;
    }
    in_.fail("expected a formula");
  }

  DagQ& dag_;
  Cursor in_;
};

void print2(const Dag2& dag, NodeId id, std::string& out) {
  const auto& n = dag.node(id);
  switch (n.kind) {
    case Node2::Kind::Top: out += "tt"; return;
    case Node2::Kind::Bot: out += "ff"; return;
    case Node2::Kind::And:
    case Node2::Kind::Or:
      out += "(";
      print2(dag, n.left, out);
      out += n.kind == Node2::Kind::And ? " & " : " | ";
      print2(dag, n.right, out);
      out += ")";
      return;
    case Node2::Kind::Mod:
      out += "[" + to_string(n.modality) + ">=" + n.q.str() + "] ";
      print2(dag, n.left, out);
      return;
  }
}

bool is_shift(const NodeQ& n) {
  return n.kind == NodeQ::Kind::ShiftUp || n.kind == NodeQ::Kind::ShiftDown;
}

void printQ_prefix(const DagQ& dag, NodeId id, std::string& out);

void printQ_expr(const DagQ& dag, NodeId id, std::string& out) {
  const auto& n = dag.node(id);
  if (is_shift(n)) {
    printQ_expr(dag, n.left, out);
    out += n.kind == NodeQ::Kind::ShiftUp ? " (+) " : " (-) ";
    out += n.q.str();
    return;
  }
  printQ_prefix(dag, id, out);
}

void printQ_prefix(const DagQ& dag, NodeId id, std::string& out) {
  const auto& n = dag.node(id);
  switch (n.kind) {
    case NodeQ::Kind::Top: out += "tt"; return;
    case NodeQ::Kind::Bot: out += "ff"; return;
    case NodeQ::Kind::And:
    case NodeQ::Kind::Or:
      out += "(";
      printQ_expr(dag, n.left, out);
      out += n.kind == NodeQ::Kind::And ? " & " : " | ";
      printQ_expr(dag, n.right, out);
      out += ")";
      return;
    case NodeQ::Kind::ShiftUp:
    case NodeQ::Kind::ShiftDown:
      out += "(";
      printQ_expr(dag, id, out);
      out += ")";
      return;
    case NodeQ::Kind::Sugeno:
      out += "<" + to_string(n.modality) + "> ";
      printQ_prefix(dag, n.left, out);
      return;
  }
}

}  // namespace

NodeId parse_formula2(Dag2& dag, std::string_view text) { return Parser2(dag, text).run(); }

NodeId parse_formulaQ(DagQ& dag, std::string_view text) { return ParserQ(dag, text).run(); }

std::string print_formula(const Dag2& dag, NodeId root) {
  std::string out;
  print2(dag, root, out);
  return out;
}

std::string print_formula(const DagQ& dag, NodeId root) {
  std::string out;
  printQ_expr(dag, root, out);
  return out;
}

}  // namespace epsdist
