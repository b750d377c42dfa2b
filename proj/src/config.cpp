#include "diimap/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "diimap/error.hpp"

namespace diimap {

namespace {

const char* kind_name(TomlValue::Kind k) {
    switch (k) {
        case TomlValue::Kind::boolean: return "boolean";
        case TomlValue::Kind::integer: return "integer";
        case TomlValue::Kind::real: return "float";
        case TomlValue::Kind::string: return "string";
        case TomlValue::Kind::array: return "array";
    }
    return "?";
}

[[noreturn]] void type_error(const std::string& key, TomlValue::Kind want, TomlValue::Kind got) {
    throw ConfigError("config key \"" + key + "\" must be a " + std::string(kind_name(want)) +
                      ", got " + kind_name(got));
}

[[noreturn]] void missing_error(const std::string& key) {
    throw ConfigError("config key \"" + key + "\" is missing");
}

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;
    const std::string& origin;

    [[noreturn]] void fail(const std::string& why) const {
        throw ConfigError(origin + ":" + std::to_string(line) + ": " + why);
    }

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char take() {
        const char c = text[pos++];
        if (c == '\n') ++line;
        return c;
    }

    void skip_inline_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos;
    }

    // Whitespace, newlines and comments; used where a value may span lines
    // (inside arrays).
    void skip_ws_and_comments() {
        while (!eof()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                take();
            } else if (c == '#') {
                while (!eof() && peek() != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    std::string parse_bare_key() {
        std::string key;
        while (!eof()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
                key.push_back(take());
            } else {
                break;
            }
        }
        if (key.empty()) fail("expected a key");
        return key;
    }

    std::string parse_basic_string() {
        take();  // opening quote
        std::string out;
        while (true) {
            if (eof()) fail("unterminated string");
            char c = take();
            if (c == '"') break;
            if (c == '\n') fail("newline inside basic string");
            if (c == '\\') {
                if (eof()) fail("unterminated escape");
                const char esc = take();
                switch (esc) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case 'r': out.push_back('\r'); break;
                    default: fail(std::string("unsupported escape \\") + esc);
                }
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    TomlValue parse_number_or_keyword() {
        std::size_t start = pos;
        while (!eof()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
                c == '.' || c == '_') {
                ++pos;
            } else {
                break;
            }
        }
        std::string tok(text.substr(start, pos - start));
        if (tok.empty()) fail("expected a value");
        if (tok == "true" || tok == "false") {
            TomlValue v;
            v.kind = TomlValue::Kind::boolean;
            v.b = tok == "true";
            return v;
        }
        std::string digits;
        digits.reserve(tok.size());
        for (char c : tok) {
            if (c != '_') digits.push_back(c);  // TOML allows _ separators
        }
        const bool looks_real = digits.find_first_of(".eE") != std::string::npos;
        TomlValue v;
        if (!looks_real) {
            std::int64_t iv = 0;
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), iv);
            if (ec != std::errc() || p != digits.data() + digits.size()) {
                fail("malformed integer \"" + tok + "\"");
            }
            v.kind = TomlValue::Kind::integer;
            v.i = iv;
            return v;
        }
        double dv = 0.0;
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), dv);
        if (ec != std::errc() || p != digits.data() + digits.size()) {
            fail("malformed number \"" + tok + "\"");
        }
        v.kind = TomlValue::Kind::real;
        v.d = dv;
        return v;
    }

    TomlValue parse_value() {
        skip_ws_and_comments();
        if (eof()) fail("expected a value");
        const char c = peek();
        if (c == '"') {
            TomlValue v;
            v.kind = TomlValue::Kind::string;
            v.s = parse_basic_string();
            return v;
        }
        if (c == '[') {
            take();
            TomlValue v;
            v.kind = TomlValue::Kind::array;
            skip_ws_and_comments();
            if (!eof() && peek() == ']') {
                take();
                return v;
            }
            while (true) {
                v.items.push_back(parse_value());
                skip_ws_and_comments();
                if (eof()) fail("unterminated array");
                const char d = take();
                if (d == ']') break;
                if (d != ',') fail("expected ',' or ']' in array");
                skip_ws_and_comments();
                if (!eof() && peek() == ']') {  // trailing comma
                    take();
                    break;
                }
            }
            return v;
        }
        return parse_number_or_keyword();
    }

    void expect_line_end() {
        skip_inline_ws();
        if (!eof() && peek() == '#') {
            while (!eof() && peek() != '\n') ++pos;
        }
        if (!eof()) {
            if (peek() == '\r') take();
            if (!eof() && peek() != '\n') fail("unexpected trailing content");
            if (!eof()) take();
        }
    }

    TomlTable parse() {
        TomlTable table;
        std::string section;
        while (true) {
            skip_ws_and_comments();
            if (eof()) break;
            if (peek() == '[') {
                take();
                if (!eof() && peek() == '[') fail("arrays of tables are not supported");
                skip_inline_ws();
                section = parse_bare_key();
                skip_inline_ws();
                if (eof() || peek() != ']') fail("expected ']' after table name");
                take();
                expect_line_end();
                continue;
            }
            const std::string key = parse_bare_key();
            skip_inline_ws();
            if (eof() || peek() != '=') fail("expected '=' after key \"" + key + "\"");
            take();
            skip_inline_ws();
            // A scalar value must sit on the same line as its key; only array
            // elements may continue across lines.
            if (eof() || peek() == '\n' || peek() == '\r' || peek() == '#') {
                fail("expected a value after key \"" + key + "\"");
            }
            TomlValue value = parse_value();
            expect_line_end();
            const std::string full = section.empty() ? key : section + "." + key;
            if (table.contains(full)) fail("duplicate key \"" + full + "\"");
            table.set(full, std::move(value));
        }
        return table;
    }
};

}  // namespace

const TomlValue* TomlTable::find(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

bool TomlTable::get_bool(const std::string& key) const {
    if (auto v = opt_bool(key)) return *v;
    missing_error(key);
}

std::int64_t TomlTable::get_int(const std::string& key) const {
    if (auto v = opt_int(key)) return *v;
    missing_error(key);
}

double TomlTable::get_real(const std::string& key) const {
    if (auto v = opt_real(key)) return *v;
    missing_error(key);
}

std::string TomlTable::get_string(const std::string& key) const {
    if (auto v = opt_string(key)) return *v;
    missing_error(key);
}

const std::vector<TomlValue>& TomlTable::get_array(const std::string& key) const {
    const TomlValue* v = find(key);
    if (!v) missing_error(key);
    if (v->kind != TomlValue::Kind::array) type_error(key, TomlValue::Kind::array, v->kind);
    return v->items;
}

std::optional<bool> TomlTable::opt_bool(const std::string& key) const {
    const TomlValue* v = find(key);
    if (!v) return std::nullopt;
    if (v->kind != TomlValue::Kind::boolean) type_error(key, TomlValue::Kind::boolean, v->kind);
    return v->b;
}

std::optional<std::int64_t> TomlTable::opt_int(const std::string& key) const {
    const TomlValue* v = find(key);
    if (!v) return std::nullopt;
    if (v->kind != TomlValue::Kind::integer) type_error(key, TomlValue::Kind::integer, v->kind);
    return v->i;
}

std::optional<double> TomlTable::opt_real(const std::string& key) const {
    const TomlValue* v = find(key);
    if (!v) return std::nullopt;
    if (v->kind == TomlValue::Kind::integer) return static_cast<double>(v->i);
    if (v->kind != TomlValue::Kind::real) type_error(key, TomlValue::Kind::real, v->kind);
    return v->d;
}

std::optional<std::string> TomlTable::opt_string(const std::string& key) const {
    const TomlValue* v = find(key);
    if (!v) return std::nullopt;
    if (v->kind != TomlValue::Kind::string) type_error(key, TomlValue::Kind::string, v->kind);
    return v->s;
}

TomlTable parse_toml(const std::string& text, const std::string& origin) {
    Parser parser{text, 0, 1, origin};
    return parser.parse();
}

TomlTable parse_toml_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_toml(buf.str(), path.string());
}

namespace {

int toml_int_field(const TomlTable& t, const std::string& key, int fallback) {
    const auto v = t.opt_int(key);
    if (!v) return fallback;
    if (*v < INT32_MIN || *v > INT32_MAX) {
        throw ConfigError("config key \"" + key + "\" out of range");
    }
    return static_cast<int>(*v);
}

}  // namespace

ScenarioConfig scenario_config_from_toml(const TomlTable& t) {
    ScenarioConfig cfg;
    cfg.width = toml_int_field(t, "synth.width", cfg.width);
    cfg.height = toml_int_field(t, "synth.height", cfg.height);
    if (auto s = t.opt_string("synth.feature_kind")) cfg.feature_kind = feature_kind_from_string(*s);
    if (auto d = t.opt_real("synth.feature_density")) cfg.feature_density = *d;
    cfg.road_width = toml_int_field(t, "synth.road_width", cfg.road_width);
    cfg.building_min = toml_int_field(t, "synth.building_min", cfg.building_min);
    cfg.building_max = toml_int_field(t, "synth.building_max", cfg.building_max);
    if (auto d = t.opt_real("synth.removal_prob")) cfg.removal_prob = *d;
    if (auto d = t.opt_real("synth.speckle_rate")) cfg.speckle_rate = *d;
    if (auto v = t.opt_int("synth.seed")) cfg.seed = static_cast<std::uint64_t>(*v);

    if (t.contains("synth.jitter")) {
        const auto& arr = t.get_array("synth.jitter");
        if (arr.size() != 2 || arr[0].kind != TomlValue::Kind::integer ||
            arr[1].kind != TomlValue::Kind::integer) {
            throw ConfigError("config key \"synth.jitter\" must be [dx, dy] integers");
        }
        cfg.jitter_dx = static_cast<int>(arr[0].i);
        cfg.jitter_dy = static_cast<int>(arr[1].i);
    }
    if (t.contains("synth.footprint_cells")) {
        for (const TomlValue& cell : t.get_array("synth.footprint_cells")) {
            if (cell.kind != TomlValue::Kind::array || cell.items.size() != 2 ||
                cell.items[0].kind != TomlValue::Kind::integer ||
                cell.items[1].kind != TomlValue::Kind::integer) {
                throw ConfigError(
                    "config key \"synth.footprint_cells\" must be an array of [row, col] pairs");
            }
            cfg.footprint_cells.emplace_back(static_cast<int>(cell.items[0].i),
                                             static_cast<int>(cell.items[1].i));
        }
    }

    // Grid and threshold parameters are shared with the analysis pipeline.
    cfg.cell_size = toml_int_field(t, "grid_size", cfg.cell_size);
    if (auto d = t.opt_real("tau")) cfg.tau = *d;
    if (auto s = t.opt_string("truth_rule")) cfg.truth_rule = truth_rule_from_string(*s);
    return cfg;
}

}  // namespace diimap
