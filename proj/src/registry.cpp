#include "actorsim/constructs.hpp"
#include "actorsim/kernel.hpp"
#include "actorsim/lambda.hpp"

namespace actorsim {

std::shared_ptr<const BehaviorRegistry> builtin_registry() {
  static const std::shared_ptr<const BehaviorRegistry> registry = [] {
    auto r = std::make_shared<BehaviorRegistry>();
    register_construct_behaviors(*r);
    register_fringe_behaviors(*r);
    register_lambda_behaviors(*r);
    return r;
  }();
  return registry;
}

}  // namespace actorsim
