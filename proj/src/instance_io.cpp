#include "iddmp/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace iddmp {

namespace {

constexpr double kReliabilityAgreement = 1e-9;

struct RawComponent {
    std::string label;
    std::optional<double> p, alpha, tau, usage_cost, repair_cost, install_cost, weight;
};

ComponentType finish_component(const RawComponent& raw) {
    const std::string who = "component '" + raw.label + "': ";
    auto need = [&](const std::optional<double>& v, const char* field) {
        if (!v) throw Error(who + "missing field '" + field + "'");
        return *v;
    };
    ComponentType c;
    c.label = raw.label;
    c.tau = need(raw.tau, "tau");
    if (!(c.tau > 0.0)) throw Error(who + "repair rate tau must be > 0");
    c.usage_cost = need(raw.usage_cost, "usage_cost");
    c.repair_cost = need(raw.repair_cost, "repair_cost");
    c.install_cost = need(raw.install_cost, "install_cost");
    c.weight = need(raw.weight, "weight");
    if (!raw.p && !raw.alpha) throw Error(who + "missing field 'p' or 'alpha'");
    if (raw.p) {
        if (!(*raw.p > 0.0 && *raw.p < 1.0)) throw Error(who + "reliability p must lie in (0,1)");
        c.alpha = derive_failure_rate(*raw.p, c.tau);
        if (raw.alpha) {
            const double implied = c.tau / (c.tau + *raw.alpha);
            if (!(std::abs(implied - *raw.p) <= kReliabilityAgreement))
                throw Error(who + "p and alpha disagree");
            c.alpha = *raw.alpha;
        }
    } else {
        c.alpha = *raw.alpha;
    }
    if (!(c.alpha > 0.0)) throw Error(who + "failure rate alpha must be > 0");
    if (c.usage_cost < 0.0 || c.repair_cost < 0.0 || c.install_cost < 0.0)
        throw Error(who + "costs must be non-negative");
    if (c.weight < 0.0) throw Error(who + "weight must be non-negative");
    return c;
}

double parse_number(const std::string& token, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw Error("");
        return v;
    } catch (const std::exception&) {
        throw Error("invalid number '" + token + "' in " + context);
    }
}

std::optional<double>* raw_field(RawComponent& raw, const std::string& name) {
    if (name == "p") return &raw.p;
    if (name == "alpha") return &raw.alpha;
    if (name == "tau") return &raw.tau;
    if (name == "usage_cost") return &raw.usage_cost;
    if (name == "repair_cost") return &raw.repair_cost;
    if (name == "install_cost") return &raw.install_cost;
    if (name == "weight") return &raw.weight;
    return nullptr;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

Catalog parse_table(const std::string& text) {
    enum class Section { None, ComponentsHeader, Components, Constraints };
    Section section = Section::None;
    std::vector<std::string> columns;
    std::vector<RawComponent> raws;
    Catalog catalog;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        if (tokens.size() == 1 && tokens[0] == "components") {
            section = Section::ComponentsHeader;
            continue;
        }
        if (tokens.size() == 1 && tokens[0] == "constraints") {
            section = Section::Constraints;
            continue;
        }
        switch (section) {
        case Section::None:
            throw Error(where + ": expected 'components' section");
        case Section::ComponentsHeader: {
            columns = tokens;
            if (columns.empty() || columns[0] != "label")
                throw Error(where + ": component header must start with 'label'");
            RawComponent probe;
            for (std::size_t k = 1; k < columns.size(); ++k)
                if (!raw_field(probe, columns[k]))
                    throw Error(where + ": unknown component column '" + columns[k] + "'");
            section = Section::Components;
            break;
        }
        case Section::Components: {
            if (tokens.size() != columns.size())
                throw Error(where + ": expected " + std::to_string(columns.size()) + " columns");
            RawComponent raw;
            raw.label = tokens[0];
            for (std::size_t k = 1; k < columns.size(); ++k) {
                if (tokens[k] == "-") continue;
                *raw_field(raw, columns[k]) = parse_number(tokens[k], where);
            }
            raws.push_back(raw);
            break;
        }
        case Section::Constraints: {
            if (tokens.size() < 3) throw Error(where + ": constraint needs name, bound, coefficients");
            Constraint row;
            row.name = tokens[0];
            row.bound = parse_number(tokens[1], where);
            for (std::size_t k = 2; k < tokens.size(); ++k)
                row.coefficients.push_back(parse_number(tokens[k], where));
            catalog.constraints.push_back(std::move(row));
            break;
        }
        }
    }
    for (const auto& raw : raws) catalog.components.push_back(finish_component(raw));
    return catalog;
}

Catalog parse_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("invalid JSON instance: ") + e.what());
    }
    Catalog catalog;
    try {
        for (const auto& item : doc.at("components")) {
            RawComponent raw;
            raw.label = item.contains("label") ? (item["label"].is_string()
                                                      ? item["label"].get<std::string>()
                                                      : item["label"].dump())
                                               : std::to_string(catalog.components.size() + 1);
            for (auto it = item.begin(); it != item.end(); ++it) {
                if (it.key() == "label") continue;
                auto* slot = raw_field(raw, it.key());
                if (!slot) throw Error("unknown component field '" + it.key() + "'");
                *slot = it.value().get<double>();
            }
            catalog.components.push_back(finish_component(raw));
        }
        if (doc.contains("constraints")) {
            for (const auto& item : doc.at("constraints")) {
                Constraint row;
                row.name = item.value("name", "c" + std::to_string(catalog.constraints.size() + 1));
                row.bound = item.at("bound").get<double>();
                row.coefficients = item.at("coefficients").get<std::vector<double>>();
                catalog.constraints.push_back(std::move(row));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed JSON instance: ") + e.what());
    }
    return catalog;
}

}  // namespace

Catalog parse_catalog(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw Error("empty instance document");
    Catalog catalog = text[first] == '{' ? parse_json(text) : parse_table(text);
    if (catalog.components.empty()) throw Error("instance has an empty component catalog");
    return catalog;
}

Instance load_instance(const std::string& text, double delta) {
    return Instance::create(parse_catalog(text), delta);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Instance load_instance_file(const std::string& path, double delta) {
    return load_instance(read_text_file(path), delta);
}

void write_catalog_table(std::ostream& out, const Catalog& catalog) {
    out << std::setprecision(17);
    out << "components\n";
    out << "label alpha tau usage_cost repair_cost install_cost weight\n";
    for (const auto& c : catalog.components)
        out << c.label << ' ' << c.alpha << ' ' << c.tau << ' ' << c.usage_cost << ' '
            << c.repair_cost << ' ' << c.install_cost << ' ' << c.weight << '\n';
    out << "constraints\n";
    for (const auto& row : catalog.constraints) {
        out << row.name << ' ' << row.bound;
        for (double a : row.coefficients) out << ' ' << a;
        out << '\n';
    }
}

void write_catalog_json(std::ostream& out, const Catalog& catalog) {
    nlohmann::json doc;
    doc["components"] = nlohmann::json::array();
    for (const auto& c : catalog.components)
        doc["components"].push_back({{"label", c.label},
                                     {"alpha", c.alpha},
                                     {"tau", c.tau},
                                     {"usage_cost", c.usage_cost},
                                     {"repair_cost", c.repair_cost},
                                     {"install_cost", c.install_cost},
                                     {"weight", c.weight}});
    doc["constraints"] = nlohmann::json::array();
    for (const auto& row : catalog.constraints)
        doc["constraints"].push_back(
            {{"name", row.name}, {"coefficients", row.coefficients}, {"bound", row.bound}});
    out << doc.dump(2) << '\n';
}

void apply_override(Catalog& catalog, const std::string& assignment) {
    const auto dot = assignment.find('.');
    const auto eq = assignment.find('=');
    if (dot == std::string::npos || eq == std::string::npos || eq < dot)
        throw Error("override must look like label.field=value, got '" + assignment + "'");
    const std::string label = assignment.substr(0, dot);
    const std::string field = assignment.substr(dot + 1, eq - dot - 1);
    const double value = parse_number(assignment.substr(eq + 1), "override");
    for (auto& c : catalog.components) {
        if (c.label != label) continue;
        if (field == "alpha") c.alpha = value;
        else if (field == "p") c.alpha = derive_failure_rate(value, c.tau);
        else if (field == "tau") c.tau = value;
        else if (field == "usage_cost") c.usage_cost = value;
        else if (field == "repair_cost") c.repair_cost = value;
        else if (field == "install_cost") c.install_cost = value;
        else if (field == "weight") c.weight = value;
        else throw Error("unknown override field '" + field + "'");
        return;
    }
    throw Error("override names unknown component '" + label + "'");
}

}  // namespace iddmp
