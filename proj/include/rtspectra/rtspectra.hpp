// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "assembly.hpp"
#include "banded.hpp"
#include "config.hpp"
#include "criteria.hpp"
#include "equilibrium.hpp"
#include "error.hpp"
#include "evolution.hpp"
#include "fields.hpp"
#include "forms.hpp"
#include "grid.hpp"
#include "mesh.hpp"
#include "pencil.hpp"
#include "quadrature.hpp"
#include "report.hpp"
#include "spectral.hpp"
#include "types.hpp"
