#pragma once

#include "colbert/csv.hpp"
#include "colbert/dataset.hpp"
#include "colbert/encoder.hpp"
#include "colbert/error.hpp"
#include "colbert/eval.hpp"
#include "colbert/model.hpp"
#include "colbert/store.hpp"
#include "colbert/textprep.hpp"
