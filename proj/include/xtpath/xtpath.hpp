#ifndef XTPATH_XTPATH_HPP_
#define XTPATH_XTPATH_HPP_

#include "xtpath/corpus.hpp"
#include "xtpath/dom.hpp"
#include "xtpath/entropy.hpp"
#include "xtpath/error.hpp"
#include "xtpath/eval.hpp"
#include "xtpath/model.hpp"
#include "xtpath/recursive_search.hpp"
#include "xtpath/shift_sim.hpp"
#include "xtpath/synthetic.hpp"
#include "xtpath/tree_match.hpp"
#include "xtpath/tree_path.hpp"
#include "xtpath/xpath.hpp"
#include "xtpath/xpath_engine.hpp"

#endif  // XTPATH_XTPATH_HPP_
