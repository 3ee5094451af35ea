#pragma once

#include "sqcav/constants.hpp"
#include "sqcav/errors.hpp"
#include "sqcav/hilbert.hpp"
#include "sqcav/dynamics.hpp"
#include "sqcav/compiler.hpp"
#include "sqcav/physics.hpp"
#include "sqcav/lindblad.hpp"
#include "sqcav/config.hpp"
#include "sqcav/io.hpp"
