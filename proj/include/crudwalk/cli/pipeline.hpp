// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crudwalk/seqgen/calls.hpp"
#include "crudwalk/seqgen/paths.hpp"
#include "crudwalk/ssg/dot.hpp"
#include "crudwalk/ssg/graph.hpp"

namespace crudwalk::cli {

struct SequenceBuild {
    ssg::StateSpaceGraph graph;
    std::vector<seqgen::Path> paths;
    std::vector<seqgen::CallSequence> sequences;  // PUTs included
    seqgen::CoverageReport coverage;
};

/// clean -> build -> select_sequences -> calls -> PUT insertion. PUT placement draws from
/// derive_seed(seed, "puts"); input generation uses other tags of the same seed.
SequenceBuild build_sequences(const ssg::RawGraph& raw, const seqgen::OperationCatalog& catalog, std::uint64_t seed,
                              int max_puts, const ssg::BuildOptions& options = {});

/// The command-line front end; returns the process exit code (0 ok, 1 ERR found, 2 usage
/// or input error).
int run(int argc, const char* const* argv);

}  // namespace crudwalk::cli
