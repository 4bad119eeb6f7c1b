// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/cli/pipeline.hpp"

#include "crudwalk/rng.hpp"

namespace crudwalk::cli {

SequenceBuild build_sequences(const ssg::RawGraph& raw, const seqgen::OperationCatalog& catalog, std::uint64_t seed,
                              int max_puts, const ssg::BuildOptions& options) {
    SequenceBuild out{ssg::build(ssg::clean(raw), options), {}, {}, {}};
    out.paths = seqgen::select_sequences(out.graph);
    out.coverage = seqgen::coverage_report(out.graph, out.paths);
    auto calls = seqgen::to_call_sequences(out.graph, out.paths, catalog);
    out.sequences = seqgen::insert_puts(calls, seqgen::put_catalog(catalog), max_puts, derive_seed(seed, "puts"));
    return out;
}

}  // namespace crudwalk::cli
