#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qcf/order_algebra.hpp"

namespace qcf::cli {

/// Runs the command line `args` (without the program name). Exit status:
/// 0 success (including unsatisfiable-up-to-bound), 1 domain error,
/// 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Relation names accepted by `order-check --relation`.
const std::vector<std::string>& relationCatalogue();

/// Builds the catalogue relation `name` between x and y; `bound` caps the
/// searches inside the combinators. Throws OrderError for an unknown name.
LazyRelation catalogueRelation(const std::string& name, const OrderExpr& x, const OrderExpr& y,
                               std::size_t bound);

}  // namespace qcf::cli
