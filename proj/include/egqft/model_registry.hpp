#pragma once

#include "egqft/symbolic_fields.hpp"

#include <string>
#include <vector>

namespace egq {

struct Vertex {
    Polynomial poly;
    std::string coupling;
    bool operator==(const Vertex&) const = default;
};

struct ModelSpec {
    std::string name;
    FieldTable fields;
    std::vector<Vertex> vertices;
    int c_const = 0;
    // Set for builtin models; lets the text format refer to structures it cannot spell out.
    std::string builtin_name;

    bool operator==(const ModelSpec& o) const {
        return fields == o.fields && vertices == o.vertices && c_const == o.c_const;
    }
};

enum class Renormalizability { super, renormalizable, nonrenormalizable };
std::string to_string(Renormalizability r);

struct ModelVerdict {
    Renormalizability renormalizability = Renormalizability::renormalizable;
    bool wal_eligible = false;
    std::vector<std::string> reasons;
};

const std::vector<std::string>& builtin_names();
ModelSpec builtin(const std::string& name);
// Builtin copy with a different c constant (for classification what-ifs).
ModelSpec with_c(ModelSpec m, int c);

ModelVerdict validate(const ModelSpec& m);
// True when every monomial of p carries at least one massive generator.
bool contains_massive_field(const Polynomial& p, const FieldTable& ft);

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_);
};

ModelSpec parse_model_spec(const std::string& text);
std::string serialize_model_spec(const ModelSpec& m);
// Builtin name or path to a model-spec file.
ModelSpec load_model(const std::string& name_or_path);

}  // namespace egq
