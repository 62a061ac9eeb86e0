#pragma once

#include "tefb/core/errors.hpp"
#include "tefb/core/matrix.hpp"
#include "tefb/core/network.hpp"
#include "tefb/core/rng.hpp"
#include "tefb/core/te_matrix.hpp"
#include "tefb/data/csv.hpp"
#include "tefb/data/dataset.hpp"
#include "tefb/data/split.hpp"
#include "tefb/data/training_set.hpp"
#include "tefb/data/xor.hpp"
#include "tefb/harness/experiment.hpp"
#include "tefb/harness/grid.hpp"
#include "tefb/harness/report.hpp"
#include "tefb/harness/spec_file.hpp"
#include "tefb/te/binary_series.hpp"
#include "tefb/te/estimator.hpp"
#include "tefb/te/series_store.hpp"
#include "tefb/train/config.hpp"
#include "tefb/train/trainer.hpp"
