#include "mlyap/config.hpp"

#include <fstream>
#include <sstream>

namespace mlyap {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& s) {
    const auto pos = s.find_first_of("#;");
    return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

ConfigFile ConfigFile::parse_text(const std::string& text) {
    ConfigFile cf;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']')
                throw ConfigError("unterminated section header '" + body + "'", line_no);
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty()) throw ConfigError("empty section name", line_no);
            if (!cf.sections_.count(section)) cf.order_.push_back({section, {}});
            cf.sections_[section];
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + body + "'", line_no);
        if (section.empty())
            throw ConfigError("key outside any [section]: '" + body + "'", line_no);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line_no);
        auto& sec = cf.sections_[section];
        if (!sec.count(key)) {
            for (auto& [name, keys] : cf.order_)
                if (name == section) keys.push_back(key);
        }
        sec[key] = Entry{value, line_no};
    }
    return cf;
}

bool ConfigFile::has_section(const std::string& section) const {
    return sections_.count(section) != 0;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
}

const ConfigFile::Entry& ConfigFile::lookup(const std::string& section,
                                            const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) {
        if (!has_section(section)) throw ConfigError("missing section [" + section + "]");
        throw ConfigError("missing key '" + key + "' in section [" + section + "]");
    }
    return *e;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
    return lookup(section, key).value;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& dflt) const {
    const Entry* e = find(section, key);
    return e ? e->value : dflt;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    const Entry& e = lookup(section, key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (trim(e.value.substr(pos)) != "") throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' is not a number: '" + e.value + "'", e.line);
    }
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double dflt) const {
    return find(section, key) ? get_double(section, key) : dflt;
}

long ConfigFile::get_int(const std::string& section, const std::string& key) const {
    const Entry& e = lookup(section, key);
    try {
        std::size_t pos = 0;
        const long v = std::stol(e.value, &pos);
        if (trim(e.value.substr(pos)) != "") throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' is not an integer: '" + e.value + "'", e.line);
    }
}

long ConfigFile::get_int(const std::string& section, const std::string& key, long dflt) const {
    return find(section, key) ? get_int(section, key) : dflt;
}

Vector ConfigFile::get_array(const std::string& section, const std::string& key) const {
    const Entry& e = lookup(section, key);
    std::istringstream in(e.value);
    std::vector<double> vals;
    std::string tok;
    while (in >> tok) {
        try {
            vals.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("array key '" + key + "' holds non-numeric entry '" + tok + "'",
                              e.line);
        }
    }
    if (vals.empty()) throw ConfigError("array key '" + key + "' is empty", e.line);
    Vector out(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) out[i] = vals[i];
    return out;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
    for (const auto& [name, ks] : order_)
        if (name == section) return ks;
    return {};
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
    if (!sections_.count(section)) order_.push_back({section, {}});
    auto& sec = sections_[section];
    if (!sec.count(key)) {
        for (auto& [name, ks] : order_)
            if (name == section) ks.push_back(key);
    }
    sec[key] = Entry{value, 0};
}

std::string ConfigFile::dump() const {
    std::ostringstream out;
    for (const auto& [name, ks] : order_) {
        out << "[" << name << "]\n";
        const auto& sec = sections_.at(name);
        for (const auto& k : ks) out << k << " = " << sec.at(k).value << "\n";
        out << "\n";
    }
    return out.str();
}

}  // namespace mlyap
