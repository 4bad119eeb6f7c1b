// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/cli/pipeline.hpp"

int main(int argc, char** argv) { return crudwalk::cli::run(argc, argv); }
