#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kreeb/caps.hpp"
#include "kreeb/engine.hpp"
#include "kreeb/model.hpp"
#include "kreeb/oracle.hpp"

namespace kreeb {

struct CliOptions {
    std::string format = "text";  // "text" | "machine"
    long long max_order = 10000;
    bool skip_oracle = false;
    std::uint64_t seed = 0;
    std::string inject_fault;  // testing aid: "", "trans", "target"

    Caps caps() const {
        Caps c;
        c.max_order = max_order;
        return c;
    }
};

// Exit code contract: 0 success, 2 schema/invariant violation (no report),
// 3 unsupported surface, 4 cap exceeded (analyze still reports, with
// certification skipped), 5 verification or oracle failure.
constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitUnsupportedSurface = 3;
constexpr int kExitCapExceeded = 4;
constexpr int kExitCheckFailed = 5;

// Everything a command reports. Text and machine renderings are generated
// from this one value.
struct Report {
    struct Piece {
        std::size_t index = 0;
        std::string kind;
        std::size_t vertices = 0;
        std::string source;
        std::string target;
        std::string target_order;
        std::size_t p = 0;
        std::string eta;
    };
    struct Generator {
        std::string element;
        std::string map;
    };
    struct Verification {
        bool passed = false;
        std::vector<std::string> checks;    // one line per check that ran
        std::vector<std::string> failures;  // failing elements, serialized
    };
    struct OracleSection {
        std::size_t piece = 0;
        std::string count;
        std::string histogram;
        std::string abelianization;
        bool match = false;
        std::vector<std::string> mismatches;
    };

    std::string command;
    SurfaceDescriptor surface;
    std::vector<std::string> warnings;
    bool generic = false;
    std::vector<Piece> pieces;

    bool has_global = false;
    std::string source;
    std::string target;
    std::string target_name;
    std::string target_order;
    std::size_t p = 0;
    std::vector<Generator> generators;
    std::string freeness_status;  // "certified" | "skipped"
    bool free = false;
    std::size_t elements_checked = 0;
    bool is_torus = false;
    std::optional<CrystalSummary> pi1;
    std::optional<Homology> h1;
    std::string description;  // "T^p" or "T^p/<group>"
    std::string display;      // description plus torus identification

    std::optional<Verification> verification;
    std::vector<OracleSection> oracle;
};

std::string render_text(const Report& report);
std::string render_machine(const Report& report);

struct CmdResult {
    int exit_code = 0;
    std::string report;      // rendered per options.format; empty on exit 2/3
    std::string diagnostic;  // human message for stderr
};

CmdResult run_analyze(const std::string& path, const CliOptions& options);
CmdResult run_verify(const std::string& path, const CliOptions& options);
CmdResult run_oracle(const std::string& path, const CliOptions& options);

}  // namespace kreeb
