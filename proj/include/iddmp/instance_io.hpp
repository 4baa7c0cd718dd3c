#pragma once

#include <iosfwd>
#include <string>

#include "iddmp/model.hpp"

namespace iddmp {

/// Parses an instance document. Two encodings are accepted and detected from the
/// first significant character: a JSON object (`{`), or the line-oriented table
/// format described in docs/FORMATS.md.
Catalog parse_catalog(const std::string& text);

/// parse_catalog + Instance::create.
Instance load_instance(const std::string& text, double delta = 0.1);
Instance load_instance_file(const std::string& path, double delta = 0.1);

std::string read_text_file(const std::string& path);

/// Writes the catalog in the table encoding (alpha column, no p column).
void write_catalog_table(std::ostream& out, const Catalog& catalog);
/// Writes the catalog as a JSON document.
void write_catalog_json(std::ostream& out, const Catalog& catalog);

/// Applies "label.field=value" overrides, e.g. "1.repair_cost=300". Fields:
/// alpha, p, tau, usage_cost, repair_cost, install_cost, weight.
void apply_override(Catalog& catalog, const std::string& assignment);

}  // namespace iddmp
