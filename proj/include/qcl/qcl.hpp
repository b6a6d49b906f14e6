#pragma once

// Umbrella header.

#include "qcl/allocator.hpp"
#include "qcl/confidence.hpp"
#include "qcl/confidence_fn.hpp"
#include "qcl/errors.hpp"
#include "qcl/experiments.hpp"
#include "qcl/fault_tree.hpp"
#include "qcl/formula.hpp"
#include "qcl/io.hpp"
#include "qcl/proof.hpp"
#include "qcl/rng.hpp"
#include "qcl/semantics.hpp"
