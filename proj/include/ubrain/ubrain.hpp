#pragma once

#include "ubrain/error.hpp"
#include "ubrain/instance.hpp"
#include "ubrain/separation.hpp"
#include "ubrain/parallel.hpp"
#include "ubrain/learner.hpp"
#include "ubrain/ec_preprocess.hpp"
#include "ubrain/harness.hpp"
#include "ubrain/benchmark.hpp"
