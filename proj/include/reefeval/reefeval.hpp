// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "reefeval/curation.hpp"
#include "reefeval/dataset.hpp"
#include "reefeval/error.hpp"
#include "reefeval/eval.hpp"
#include "reefeval/frames.hpp"
#include "reefeval/io.hpp"
#include "reefeval/manifest.hpp"
#include "reefeval/predictions.hpp"
#include "reefeval/report.hpp"
