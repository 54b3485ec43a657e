#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trapsnet/errors.hpp"
#include "trapsnet/mdp.hpp"
#include "trapsnet/model.hpp"
#include "trapsnet/params.hpp"

namespace trapsnet {

/// Syntax error with the 1-based source position and what was expected.
struct ParseError : Error {
    int line;
    int column;
    std::string expected;

    ParseError(int line_, int column_, const std::string& message,
               std::string expected_ = "")
        : Error("parse error at " + std::to_string(line_) + ":" +
                std::to_string(column_) + ": " + message),
          line(line_), column(column_), expected(std::move(expected_)) {}
};

/// Well-formed syntax with an inconsistent meaning (unknown object,
/// duplicate assignment, adjacency self-loop, ...).
struct SemanticError : Error {
    int line;
    int column;

    SemanticError(int line_, int column_, const std::string& message)
        : Error("semantic error at " + std::to_string(line_) + ":" +
                std::to_string(column_) + ": " + message),
          line(line_), column(column_) {}
};

/// Parse an instance document. The accepted grammar is
///
///   instance <name> {
///     domain = <id>;
///     objects { <type> : {o1, ..., on}; };
///     non-fluents { <name>(<args>) = <value>; ... };
///     init-state { <fluent>(<obj>) = <value>; ... };
///     horizon = <int>;
///     discount = <real>;
///     params { <key> = <real>; ... };
///   }
///
/// with the non-fluents, init-state and params blocks optional. Fluents not
/// listed default to 0, dynamics parameters to their domain defaults. The
/// binary non-fluent is symmetrized on load for the undirected domains and
/// kept directed for academic_advising.
ProblemInstance parse_instance(const std::string& text);

/// Canonical text form: fixed block order, objects in declaration order,
/// assignments sorted, shortest round-trip number formatting. Parsing the
/// result reproduces the instance exactly.
std::string write_instance(const ProblemInstance& instance);

ProblemInstance load_instance_file(const std::string& path);
void save_instance_file(const ProblemInstance& instance, const std::string& path);

/// An instance together with the text it was parsed from.
struct InstanceDocument {
    std::string text;
    ProblemInstance instance;
    std::string source_path;   // empty when parsed from memory
};

InstanceDocument load_instance_document(const std::string& path);

struct CheckpointMeta {
    double wall_seconds = 0.0;
    std::uint64_t gradient_steps = 0;
    std::uint64_t seed = 0;
};

/// A trained parameter snapshot. Contains nothing that depends on instance
/// size, which is what lets a checkpoint trained on small problems drive
/// arbitrarily large ones.
struct Checkpoint {
    static constexpr std::uint32_t kFormatVersion = 1;

    std::uint32_t format_version = kFormatVersion;
    DomainId domain = DomainId::SysAdmin;
    EncoderConfig config;
    nn::ParamStore params;
    CheckpointMeta meta;
};

/// Little-endian binary encoding with IEEE 64-bit tensors and a trailing
/// FNV-1a checksum; save(load(bytes)) is byte-identical.
std::vector<std::uint8_t> save_checkpoint(const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint_file(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint_file(const std::string& path);

} // namespace trapsnet
