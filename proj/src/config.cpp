#include "wavecert/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace wavecert {

namespace {

using json = nlohmann::json;

class ValueParser {
public:
    ValueParser(std::string_view text, int line) : text_(text), line_(line) {}

    json parse()
    {
        json v = value();
        skip();
        if (pos_ != text_.size())
            fail("trailing characters after value");
        return v;
    }

private:
    std::string_view text_;
    int line_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError("line " + std::to_string(line_) + ": " + what);
    }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    json value()
    {
        skip();
        if (pos_ >= text_.size())
            fail("missing value");
        char c = text_[pos_];
        if (c == '"')
            return string();
        if (c == '[')
            return array();
        if (text_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return true;
        }
        if (text_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return false;
        }
        return number();
    }

    json string()
    {
        ++pos_;
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size())
                ++pos_;
            out += text_[pos_++];
        }
        if (pos_ >= text_.size())
            fail("unterminated string");
        ++pos_;
        return out;
    }

    json array()
    {
        ++pos_;
        json arr = json::array();
        skip();
        if (pos_ < text_.size() && text_[pos_] == ']') {
            ++pos_;
            return arr;
        }
        for (;;) {
            arr.push_back(value());
            skip();
            if (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                continue;
            }
            if (pos_ < text_.size() && text_[pos_] == ']') {
                ++pos_;
                return arr;
            }
            fail("expected ',' or ']' in array");
        }
    }

    json number()
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                                       text_[pos_] == '-' || text_[pos_] == '+'))
            ++pos_;
        std::string_view tok = text_.substr(start, pos_ - start);
        const char* first = tok.data();
        if (!tok.empty() && tok.front() == '+')
            ++first;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
            fail("malformed value '" + std::string(tok) + "'");
        return v;
    }
};

std::string strip_comment(const std::string& line)
{
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\'))
            in_string = !in_string;
        if (line[i] == '#' && !in_string)
            return line.substr(0, i);
    }
    return line;
}

std::string trim(const std::string& s)
{
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    json value;
    int line;
};

double as_number(const Entry& e, const std::string& key)
{
    if (!e.value.is_number())
        throw ConfigError("line " + std::to_string(e.line) + ": '" + key + "' must be a number");
    return e.value.get<double>();
}

int as_int(const Entry& e, const std::string& key)
{
    double v = as_number(e, key);
    if (v != static_cast<double>(static_cast<int>(v)))
        throw ConfigError("line " + std::to_string(e.line) + ": '" + key + "' must be an integer");
    return static_cast<int>(v);
}

bool as_bool(const Entry& e, const std::string& key)
{
    if (!e.value.is_boolean())
        throw ConfigError("line " + std::to_string(e.line) + ": '" + key + "' must be true or false");
    return e.value.get<bool>();
}

std::string as_string(const Entry& e, const std::string& key)
{
    if (!e.value.is_string())
        throw ConfigError("line " + std::to_string(e.line) + ": '" + key + "' must be a string");
    return e.value.get<std::string>();
}

std::vector<std::string> as_strings(const Entry& e, const std::string& key)
{
    if (!e.value.is_array())
        throw ConfigError("line " + std::to_string(e.line) + ": '" + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& v : e.value) {
        if (!v.is_string())
            throw ConfigError("line " + std::to_string(e.line) + ": '" + key + "' must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::vector<double> as_numbers(const Entry& e, const std::string& key)
{
    if (!e.value.is_array())
        throw ConfigError("line " + std::to_string(e.line) + ": '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : e.value) {
        if (!v.is_number())
            throw ConfigError("line " + std::to_string(e.line) + ": '" + key + "' must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys = {
        {"problem", {"dim", "A.diagonal", "A.entries", "weight"}},
        {"region", {"box", "constraints", "margin"}},
        {"options",
         {"resolution", "lambda_max", "target_margin", "force_j", "horizon", "step", "center", "count", "metric",
          "probe_axis", "probes", "check_w32"}},
    };
    return keys;
}

} // namespace

ProblemConfig parse_config(std::string_view text)
{
    std::map<std::string, Entry> entries; // "section.key"
    std::vector<std::pair<std::string, Entry>> constants;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(strip_comment(raw));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "constants" && !known_keys().count(section))
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' outside any section");
        json value = ValueParser(trim(line.substr(eq + 1)), line_no).parse();
        if (section == "constants") {
            constants.emplace_back(key, Entry{value, line_no});
            continue;
        }
        if (!known_keys().at(section).count(key))
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "' in [" + section + "]");
        std::string full = section + "." + key;
        if (entries.count(full))
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        entries.emplace(full, Entry{value, line_no});
    }

    auto find = [&](const std::string& k) -> const Entry* {
        auto it = entries.find(k);
        return it == entries.end() ? nullptr : &it->second;
    };
    auto require = [&](const std::string& k) -> const Entry& {
        const Entry* e = find(k);
        if (!e)
            throw ConfigError("missing required key '" + k + "'");
        return *e;
    };

    ProblemConfig c;
    c.dim = as_int(require("problem.dim"), "dim");
    if (c.dim < 1)
        throw ConfigError("line " + std::to_string(require("problem.dim").line) + ": dim must be positive");
    if (auto* e = find("problem.A.diagonal"))
        c.diagonal = as_bool(*e, "A.diagonal");
    c.entries = as_strings(require("problem.A.entries"), "A.entries");
    if (auto* e = find("problem.weight"))
        c.weight = as_string(*e, "weight");

    for (const auto& [name, e] : constants) {
        if (c.constants.count(name))
            throw ConfigError("line " + std::to_string(e.line) + ": duplicate constant '" + name + "'");
        if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
            throw ConfigError("line " + std::to_string(e.line) + ": invalid constant name '" + name + "'");
        c.constants[name] = as_number(e, name);
    }

    const Entry& box = require("region.box");
    if (!box.value.is_array() || box.value.size() != static_cast<std::size_t>(c.dim))
        throw ConfigError("line " + std::to_string(box.line) + ": box needs one [lo, hi] pair per axis");
    for (const auto& axis : box.value) {
        if (!axis.is_array() || axis.size() != 2 || !axis[0].is_number() || !axis[1].is_number())
            throw ConfigError("line " + std::to_string(box.line) + ": box axes must be [lo, hi] number pairs");
        c.box.push_back({axis[0].get<double>(), axis[1].get<double>()});
    }
    if (auto* e = find("region.constraints"))
        c.constraints = as_strings(*e, "constraints");
    if (auto* e = find("region.margin"))
        c.margin = as_number(*e, "margin");

    if (auto* e = find("options.resolution"))
        c.resolution = as_int(*e, "resolution");
    if (auto* e = find("options.lambda_max"))
        c.lambda_max = as_number(*e, "lambda_max");
    if (auto* e = find("options.target_margin"))
        c.target_margin = as_number(*e, "target_margin");
    if (auto* e = find("options.force_j"))
        c.force_j = as_int(*e, "force_j");
    if (auto* e = find("options.horizon"))
        c.horizon = as_number(*e, "horizon");
    if (auto* e = find("options.step"))
        c.step = as_number(*e, "step");
    if (auto* e = find("options.center"))
        c.center = as_numbers(*e, "center");
    if (auto* e = find("options.count"))
        c.count = as_int(*e, "count");
    if (auto* e = find("options.metric"))
        c.metric = as_string(*e, "metric");
    if (auto* e = find("options.probe_axis"))
        c.probe_axis = as_int(*e, "probe_axis");
    if (auto* e = find("options.probes"))
        c.probes = as_numbers(*e, "probes");
    if (auto* e = find("options.check_w32"))
        c.check_w32 = as_bool(*e, "check_w32");

    if (c.center && c.center->size() != static_cast<std::size_t>(c.dim))
        throw ConfigError("center must have " + std::to_string(c.dim) + " coordinates");
    if (c.force_j && (*c.force_j < 1 || *c.force_j > c.dim))
        throw ConfigError("force_j must lie in 1.." + std::to_string(c.dim));
    return c;
}

ProblemConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Region ProblemConfig::region() const
{
    return Region::from_strings(box, constraints, margin, constants);
}

nlohmann::ordered_json ProblemConfig::to_json() const
{
    nlohmann::ordered_json j;
    j["dim"] = dim;
    j["A.diagonal"] = diagonal;
    j["A.entries"] = entries;
    j["weight"] = weight ? nlohmann::ordered_json(*weight) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json consts = nlohmann::ordered_json::object();
    for (const auto& [k, v] : constants)
        consts[k] = v;
    j["constants"] = consts;
    nlohmann::ordered_json b = nlohmann::ordered_json::array();
    for (const auto& axis : box)
        b.push_back({axis.lo, axis.hi});
    j["box"] = b;
    j["constraints"] = constraints;
    j["margin"] = margin;
    j["resolution"] = resolution;
    j["lambda_max"] = lambda_max;
    j["target_margin"] = target_margin;
    j["force_j"] = force_j ? nlohmann::ordered_json(*force_j) : nlohmann::ordered_json(nullptr);
    j["horizon"] = horizon;
    j["step"] = step;
    j["center"] = center ? nlohmann::ordered_json(*center) : nlohmann::ordered_json(nullptr);
    j["count"] = count;
    j["metric"] = metric;
    j["probe_axis"] = probe_axis;
    j["probes"] = probes;
    j["check_w32"] = check_w32;
    return j;
}

} // namespace wavecert
