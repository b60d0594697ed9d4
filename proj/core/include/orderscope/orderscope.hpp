#pragma once

#include "orderscope/abelian.hpp"
#include "orderscope/bigint.hpp"
#include "orderscope/errors.hpp"
#include "orderscope/localmonoid.hpp"
#include "orderscope/ordercore.hpp"
#include "orderscope/quadfield.hpp"
#include "orderscope/report.hpp"
#include "orderscope/residue.hpp"
#include "orderscope/transfer.hpp"
#include "orderscope/zerosum.hpp"
