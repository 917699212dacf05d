// A short tour: classify a few maps, build family instances, run a sweep.

#include <iostream>

#include "nto1/nto1.hpp"

using namespace nto1;

int main() {
  const Field F7 = Field::make(7, 1);
  for (std::uint64_t d : {2, 3, 5}) {
    const auto r = classify(PolyMap::monomial(F7, F7.one(), d));
    std::cout << "x^" << d << " over GF(7): " << report_to_json(F7, r).dump() << "\n";
  }

  const Field F27 = Field::make(3, 3);
  std::uint64_t positives = 0;
  for (const auto& row : cubic_sweep(F27)) positives += row.brute_force;
  std::cout << "3-to-1 normalized cubics over GF(27): " << positives << " of " << F27.order() * F27.order() << "\n";

  const Field F11 = Field::make(11, 1);
  const auto I = construct_miu2(F11, 1, F11.from_int(1), F11.from_int(2));
  const auto v = evaluate(I);
  std::cout << "miu2 over GF(11), r=1, a=1, b=2: predicate " << v.predicate << ", brute force " << v.f_nto1 << "\n";

  const Field F729 = Field::make(3, 6);
  for (int variant : {1, 2, 3}) {
    std::uint64_t pos = 0, agree = 0;
    const auto rows = trace_sweep(F729, 3, [&](const Element& d) { return construct_gouzao(variant, F729, 27, d); });
    for (const auto& r : rows) {
      pos += r.brute_force;
      agree += r.agree();
    }
    std::cout << "gouzao" << variant << " over GF(3^6): " << pos << " of " << rows.size()
              << " trace classes 3-to-1, predicate agrees on " << agree << "\n";
  }
}
