#pragma once

#include "efgkit/alphabet.hpp"
#include "efgkit/efg.hpp"
#include "efgkit/efg_index.hpp"
#include "efgkit/efg_io.hpp"
#include "efgkit/error.hpp"
#include "efgkit/graph_validity.hpp"
#include "efgkit/hardness.hpp"
#include "efgkit/index_io.hpp"
#include "efgkit/interval_union_set.hpp"
#include "efgkit/matching.hpp"
#include "efgkit/msa.hpp"
#include "efgkit/range_min.hpp"
#include "efgkit/rank_select.hpp"
#include "efgkit/segmentation.hpp"
#include "efgkit/suffix_structure.hpp"
#include "efgkit/validity.hpp"
#include "efgkit/wheeler.hpp"
