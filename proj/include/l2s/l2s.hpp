/**
 * Umbrella header.
 */
#pragma once

#include "builders.hpp"
#include "chain.hpp"
#include "core.hpp"
#include "corpus.hpp"
#include "covers.hpp"
#include "group_ring.hpp"
#include "io.hpp"
#include "laurent.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "specialize.hpp"
#include "sutured.hpp"
#include "word.hpp"
