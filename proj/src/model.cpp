#include "spinforge/model.hpp"

#include <stdexcept>

namespace spinforge {

int ChainTopology::hydrogen(int chain, int k) const {
  if (chain < 0 || chain > 1)
    throw std::invalid_argument("ChainTopology::hydrogen: chain must be 0 or 1");
  if (k < 1 || k > n_per_chain)
    throw std::invalid_argument("ChainTopology::hydrogen: k out of range");
  return chain * n_per_chain + k;
}

void ChainTopology::validate() const {
  if (n_per_chain < 1)
    throw std::invalid_argument("ChainTopology: n_per_chain must be >= 1");
}

OperatorSum build_natural_hamiltonian(const ChainTopology& topo,
                                      const CouplingConstants& c,
                                      SpinConvention conv) {
  topo.validate();
  OperatorSum h(topo.n_sites());
  for (int chain = 0; chain < 2; ++chain) {
    PauliString se = spin_op2(PauliAxis::Z, topo.carbon(), PauliAxis::Z,
                              topo.hydrogen(chain, 1), conv);
    se.coefficient *= c.j_ch;
    h.add(std::move(se));
  }
  for (int chain = 0; chain < 2; ++chain) {
    for (int k = 1; k < topo.n_per_chain; ++k) {
      const int a = topo.hydrogen(chain, k);
      const int b = topo.hydrogen(chain, k + 1);
      PauliString zz = spin_op2(PauliAxis::Z, a, PauliAxis::Z, b, conv);
      PauliString xx = spin_op2(PauliAxis::X, a, PauliAxis::X, b, conv);
      PauliString yy = spin_op2(PauliAxis::Y, a, PauliAxis::Y, b, conv);
      zz.coefficient *= 2.0 * c.j_hh;
      xx.coefficient *= -c.j_hh;
      yy.coefficient *= -c.j_hh;
      h.add(std::move(zz));
      h.add(std::move(xx));
      h.add(std::move(yy));
    }
  }
  return h;
}

OperatorSum build_effective_hamiltonian(const ChainTopology& topo,
                                        const CouplingConstants& c,
                                        SpinConvention conv) {
  topo.validate();
  OperatorSum h(topo.n_sites());
  const double j_ch_eff = c.j_ch_eff();
  const double j_hh_eff = c.j_hh_eff();
  for (int chain = 0; chain < 2; ++chain) {
    const int first = topo.hydrogen(chain, 1);
    PauliString zz = spin_op2(PauliAxis::Z, topo.carbon(), PauliAxis::Z,
                              first, conv);
    PauliString xx = spin_op2(PauliAxis::X, topo.carbon(), PauliAxis::X,
                              first, conv);
    PauliString yy = spin_op2(PauliAxis::Y, topo.carbon(), PauliAxis::Y,
                              first, conv);
    zz.coefficient *= 2.0 * j_ch_eff;
    xx.coefficient *= j_ch_eff;
    yy.coefficient *= j_ch_eff;
    h.add(std::move(zz));
    h.add(std::move(xx));
    h.add(std::move(yy));
  }
  for (int chain = 0; chain < 2; ++chain) {
    for (int k = 1; k < topo.n_per_chain; ++k) {
      const int a = topo.hydrogen(chain, k);
      const int b = topo.hydrogen(chain, k + 1);
      PauliString zz = spin_op2(PauliAxis::Z, a, PauliAxis::Z, b, conv);
      PauliString xx = spin_op2(PauliAxis::X, a, PauliAxis::X, b, conv);
      PauliString yy = spin_op2(PauliAxis::Y, a, PauliAxis::Y, b, conv);
      zz.coefficient *= 2.0 * j_hh_eff;
      xx.coefficient *= -j_hh_eff;
      yy.coefficient *= -j_hh_eff;
      h.add(std::move(zz));
      h.add(std::move(xx));
      h.add(std::move(yy));
    }
  }
  return h;
}

OperatorSum build_zeeman(const ZeemanParams& z, SpinConvention conv) {
  if (z.omega1 <= 0.0)
    throw std::invalid_argument("build_zeeman: omega1 must be > 0");
  OperatorSum h(1);
  PauliString sz = spin_op(PauliAxis::Z, 0, conv);
  sz.coefficient *= -0.5 * z.hbar * z.omega1;
  h.add(std::move(sz));
  return h;
}

}  // namespace spinforge
