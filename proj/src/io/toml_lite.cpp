#include "edgescope/io/toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "edgescope/io/csv.hpp"

namespace edgescope {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw std::runtime_error("toml parse error at line " + std::to_string(line) + ": " + what);
}

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;
    int line;

    bool done() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    void skip_ws() {
        while (!done() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
};

std::string parse_basic_string(Cursor& c) {
    ++c.pos;  // opening quote
    std::string out;
    while (true) {
        if (c.done()) fail(c.line, "unterminated string");
        const char ch = c.s[c.pos++];
        if (ch == '"') return out;
        if (ch == '\\') {
            if (c.done()) fail(c.line, "dangling escape");
            const char esc = c.s[c.pos++];
            switch (esc) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                default: fail(c.line, std::string("unsupported escape \\") + esc);
            }
        } else {
            out += ch;
        }
    }
}

nlohmann::json parse_scalar(Cursor& c);

nlohmann::json parse_array(Cursor& c) {
    ++c.pos;  // '['
    nlohmann::json arr = nlohmann::json::array();
    c.skip_ws();
    if (!c.done() && c.peek() == ']') {
        ++c.pos;
        return arr;
    }
    while (true) {
        c.skip_ws();
        arr.push_back(parse_scalar(c));
        c.skip_ws();
        if (c.done()) fail(c.line, "unterminated array");
        const char ch = c.s[c.pos++];
        if (ch == ']') return arr;
        if (ch != ',') fail(c.line, "expected ',' or ']' in array");
    }
}

nlohmann::json parse_scalar(Cursor& c) {
    if (c.done()) fail(c.line, "missing value");
    const char ch = c.peek();
    if (ch == '"') return parse_basic_string(c);
    if (ch == '[') return parse_array(c);

    std::size_t end = c.pos;
    while (end < c.s.size() && c.s[end] != ',' && c.s[end] != ']' && c.s[end] != '#') ++end;
    std::string token = c.s.substr(c.pos, end - c.pos);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\t')) token.pop_back();
    c.pos = end;
    if (token.empty()) fail(c.line, "missing value");
    if (token == "true") return true;
    if (token == "false") return false;

    // Number: integer if it parses fully as one and has no float markers.
    const bool looks_float = token.find_first_of(".eE") != std::string::npos &&
                             token.find("0x") == std::string::npos;
    errno = 0;
    char* rest = nullptr;
    if (!looks_float) {
        const long long iv = std::strtoll(token.c_str(), &rest, 10);
        if (errno == 0 && rest && *rest == '\0') return iv;
    }
    rest = nullptr;
    const double dv = std::strtod(token.c_str(), &rest);
    if (rest && *rest == '\0') return dv;
    fail(c.line, "cannot parse value '" + token + "'");
}

std::string parse_key(Cursor& c) {
    std::string key;
    while (!c.done()) {
        const char ch = c.peek();
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.') {
            key += ch;
            ++c.pos;
        } else {
            break;
        }
    }
    if (key.empty()) fail(c.line, "expected key");
    return key;
}

nlohmann::json* table_at(nlohmann::json& root, const std::string& dotted, int line) {
    nlohmann::json* node = &root;
    std::size_t start = 0;
    while (start <= dotted.size()) {
        const std::size_t dot = dotted.find('.', start);
        const std::string part = dotted.substr(start, dot == std::string::npos ? dot : dot - start);
        if (part.empty()) fail(line, "empty table name component");
        if (!node->contains(part)) (*node)[part] = nlohmann::json::object();
        node = &(*node)[part];
        if (!node->is_object()) fail(line, "key '" + part + "' is not a table");
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return node;
}

}  // namespace

nlohmann::json parse_toml(const std::string& text) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* current = &root;

    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        Cursor c{raw, 0, line_no};
        c.skip_ws();
        if (c.done() || c.peek() == '#') continue;

        if (c.peek() == '[') {
            ++c.pos;
            const std::string name = parse_key(c);
            c.skip_ws();
            if (c.done() || c.peek() != ']') fail(line_no, "expected ']'");
            ++c.pos;
            c.skip_ws();
            if (!c.done() && c.peek() != '#') fail(line_no, "trailing characters after table header");
            current = table_at(root, name, line_no);
            continue;
        }

        const std::string key = parse_key(c);
        c.skip_ws();
        if (c.done() || c.peek() != '=') fail(line_no, "expected '=' after key '" + key + "'");
        ++c.pos;
        c.skip_ws();
        nlohmann::json value = parse_scalar(c);
        c.skip_ws();
        if (!c.done() && c.peek() != '#') fail(line_no, "trailing characters after value of '" + key + "'");

        nlohmann::json* target = current;
        std::string leaf = key;
        const std::size_t last_dot = key.rfind('.');
        if (last_dot != std::string::npos) {
            target = table_at(*current, key.substr(0, last_dot), line_no);
            leaf = key.substr(last_dot + 1);
            if (leaf.empty()) fail(line_no, "empty key component");
        }
        if (target->contains(leaf)) fail(line_no, "duplicate key '" + key + "'");
        (*target)[leaf] = std::move(value);
    }
    return root;
}

nlohmann::json load_config_file(const std::string& path) {
    const std::string text = read_text_file(path);
    const std::size_t dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "json") {
        try {
            return nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error("json parse error in " + path + ": " + e.what());
        }
    }
    return parse_toml(text);
}

}  // namespace edgescope
