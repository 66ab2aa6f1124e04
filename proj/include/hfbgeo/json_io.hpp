#pragma once

#include "hfbgeo/blockmat.hpp"
#include "hfbgeo/boggroup.hpp"
#include "hfbgeo/g1pdm.hpp"

#include <json.hpp>

namespace hfbgeo {

using Json = nlohmann::json;

/// Matrix encoding: {"n": int, "re": row-major, "im": row-major}.
inline Json to_json(const CMat& m) {
  const int n = static_cast<int>(m.rows());
  Json j;
  j["n"] = n;
  std::vector<double> re, im;
  re.reserve(n * n);
  im.reserve(n * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < static_cast<int>(m.cols()); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

inline CMat cmat_from_json(const Json& j) {
  if (!j.contains("n") || !j.contains("re") || !j.contains("im"))
    throw BadSpec("matrix JSON must carry n, re, im");
  const int n = j.at("n").get<int>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (static_cast<int>(re.size()) != n * n || static_cast<int>(im.size()) != n * n)
    throw BadSpec("matrix JSON has inconsistent sizes");
  CMat m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(re[r * n + c], im[r * n + c]);
  return m;
}

inline Json to_json(const BlockOp& x) {
  return Json{{"x11", to_json(x.x11)},
              {"x12", to_json(x.x12)},
              {"x21", to_json(x.x21)},
              {"x22", to_json(x.x22)}};
}
inline BlockOp blockop_from_json(const Json& j) {
  return BlockOp(cmat_from_json(j.at("x11")), cmat_from_json(j.at("x12")),
                 cmat_from_json(j.at("x21")), cmat_from_json(j.at("x22")));
}

inline Json to_json(const BogUnitary& w) {
  return Json{{"u", to_json(w.u)}, {"v", to_json(w.v)}};
}
inline BogUnitary bogunitary_from_json(const Json& j) {
  return BogUnitary(cmat_from_json(j.at("u")), cmat_from_json(j.at("v")));
}

inline Json to_json(const BogAlgebra& x) {
  return Json{{"x1", to_json(x.x1)}, {"x2", to_json(x.x2)}};
}
inline BogAlgebra bogalgebra_from_json(const Json& j) {
  return BogAlgebra(cmat_from_json(j.at("x1")), cmat_from_json(j.at("x2")));
}

inline Json to_json(const G1pdm& g) {
  return Json{{"gamma", to_json(g.gamma)}, {"alpha", to_json(g.alpha)}};
}
inline G1pdm g1pdm_from_json(const Json& j) {
  return G1pdm(cmat_from_json(j.at("gamma")), cmat_from_json(j.at("alpha")));
}

}  // namespace hfbgeo
