/*
 * Copyright 2026 The nuvqe Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "nuvqe/fermion.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#ifndef NUVQE_DEFAULT_FIXTURE_DIR
#define NUVQE_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace nuvqe {

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

// Finds `KEY = <int>` inside the namelist header.
std::optional<int> header_int(const std::string& header, const std::string& key) {
  std::size_t pos = 0;
  while ((pos = header.find(key, pos)) != std::string::npos) {
    const bool word_start = pos == 0 || !std::isalnum(static_cast<unsigned char>(header[pos - 1]));
    std::size_t i = pos + key.size();
    while (i < header.size() && std::isspace(static_cast<unsigned char>(header[i]))) ++i;
    if (word_start && i < header.size() && header[i] == '=') {
      ++i;
      while (i < header.size() && std::isspace(static_cast<unsigned char>(header[i]))) ++i;
      std::size_t end = i;
      if (end < header.size() && (header[end] == '-' || header[end] == '+')) ++end;
      while (end < header.size() && std::isdigit(static_cast<unsigned char>(header[end]))) ++end;
      if (end == i) throw std::runtime_error("FCIDUMP: header field " + key + " has no value");
      return std::stoi(header.substr(i, end - i));
    }
    pos += key.size();
  }
  return std::nullopt;
}

bool parity_of(std::uint64_t v) { return std::popcount(v) & 1; }

// Inverse of a unit lower-triangular GF(2) matrix given as row masks.
std::vector<std::uint64_t> gf2_inverse(const std::vector<std::uint64_t>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<std::uint64_t> a = rows;
  std::vector<std::uint64_t> inv(n);
  for (int i = 0; i < n; ++i) inv[i] = std::uint64_t{1} << i;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if ((a[r] >> col) & 1U) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw std::logic_error("encoding matrix is singular");
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r != col && ((a[r] >> col) & 1U)) {
        a[r] ^= a[col];
        inv[r] ^= inv[col];
      }
    }
  }
  return inv;
}

struct Accumulator {
  struct Key {
    std::uint64_t x, z;
    bool operator==(const Key&) const = default;
  };
  struct Hash {
    std::size_t operator()(const Key& k) const {
      return static_cast<std::size_t>(k.x * 0x9E3779B97F4A7C15ULL ^ (k.z + 0x632BE59BD9B4E019ULL));
    }
  };
  std::unordered_map<Key, cplx, Hash> terms;

  void add_product(const PauliSum& a, const PauliSum& b, cplx scale) {
    for (const auto& [sa, ca] : a.terms()) {
      for (const auto& [sb, cb] : b.terms()) {
        const PauliString p = pauli_mul(sa, sb);
        terms[{p.x_mask(), p.z_mask()}] += scale * ca * cb * p.phase_value();
      }
    }
  }

  PauliSum finish(int n_qubits) const {
    PauliSum out(n_qubits);
    for (const auto& [k, c] : terms) {
      if (std::abs(c) >= kDropTolerance) out.add(PauliString(n_qubits, k.x, k.z), c);
    }
    return out;
  }
};

// Mode permutation interleaved -> spin blocks (all up, then all down).
std::vector<int> block_order(int n_modes) {
  std::vector<int> perm(n_modes);
  const int half = n_modes / 2;
  for (int k = 0; k < half; ++k) {
    perm[2 * k] = k;
    perm[2 * k + 1] = half + k;
  }
  return perm;
}

FermionHamiltonian permute_modes(const FermionHamiltonian& h, const std::vector<int>& perm) {
  FermionHamiltonian out = h;
  const int n = h.n_spin_orbitals;
  const std::size_t un = n;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) out.h1[perm[p] * un + perm[q]] = h.one_body(p, q);
  }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
          out.h2[((perm[p] * un + perm[q]) * un + perm[r]) * un + perm[s]] = h.two_body(p, q, r, s);
  return out;
}

std::uint64_t remove_bits(std::uint64_t v, int low, int high) {
  // Removes bit `high` first so `low` keeps its position.
  auto drop = [](std::uint64_t w, int bit) {
    const std::uint64_t below = w & ((std::uint64_t{1} << bit) - 1);
    const std::uint64_t above = (w >> (bit + 1)) << bit;
    return below | above;
  };
  return drop(drop(v, high), low);
}

PauliSum taper_two_qubits(const PauliSum& h, int q_low, double sign_low, int q_high,
                          double sign_high) {
  const int n = h.n_qubits();
  PauliSum out(n - 2);
  const std::uint64_t lo = std::uint64_t{1} << q_low;
  const std::uint64_t hi = std::uint64_t{1} << q_high;
  for (const auto& [s, c] : h.terms()) {
    if (s.x_mask() & (lo | hi)) {
      throw std::logic_error("two-qubit reduction: tapered qubit carries X/Y factor in " +
                             s.label());
    }
    cplx coeff = c;
    if (s.z_mask() & lo) coeff *= sign_low;
    if (s.z_mask() & hi) coeff *= sign_high;
    out.add(PauliString(n - 2, remove_bits(s.x_mask(), q_low, q_high),
                        remove_bits(s.z_mask(), q_low, q_high)),
            coeff);
  }
  return out.simplified();
}

std::uint64_t occupation_mask(const FermionHamiltonian& h, bool block) {
  const int half = h.n_spin_orbitals / 2;
  std::uint64_t occ = 0;
  for (int k = 0; k < h.n_alpha(); ++k) occ |= std::uint64_t{1} << (block ? k : 2 * k);
  for (int k = 0; k < h.n_beta(); ++k) occ |= std::uint64_t{1} << (block ? half + k : 2 * k + 1);
  return occ;
}

}  // namespace

void FermionHamiltonian::validate(double tol) const {
  const int n = n_spin_orbitals;
  if (n < 1) throw std::invalid_argument("FermionHamiltonian: no spin orbitals");
  const std::size_t un = n;
  if (h1.size() != un * un || h2.size() != un * un * un * un) {
    throw std::invalid_argument("FermionHamiltonian: tensor size mismatch");
  }
  if (n_electrons < 0 || n_electrons > n) {
    throw std::invalid_argument("FermionHamiltonian: electron count out of range");
  }
  if (multiplicity < 1 || (n_electrons + multiplicity - 1) % 2 != 0 ||
      n_alpha() > n / 2 || n_beta() < 0) {
    throw std::invalid_argument("FermionHamiltonian: inconsistent multiplicity");
  }
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (std::abs(one_body(p, q) - one_body(q, p)) > tol) {
        throw std::invalid_argument("FermionHamiltonian: h1 not symmetric");
      }
    }
  }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double g = two_body(p, q, r, s);
          if (std::abs(g - two_body(q, p, r, s)) > tol ||
              std::abs(g - two_body(p, q, s, r)) > tol ||
              std::abs(g - two_body(r, s, p, q)) > tol) {
            throw std::invalid_argument("FermionHamiltonian: h2 violates 8-fold symmetry");
          }
        }
}

FermionHamiltonian parse_fcidump(std::istream& in) {
  std::string header;
  std::string line;
  bool in_header = false;
  bool header_done = false;
  while (!header_done && std::getline(in, line)) {
    const std::string u = upper(line);
    if (!in_header) {
      if (u.find("&FCI") == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw std::runtime_error("FCIDUMP: missing &FCI header");
      }
      in_header = true;
    }
    header += u + "\n";
    if (u.find("&END") != std::string::npos || u.find('/') != std::string::npos) {
      header_done = true;
    }
  }
  if (!header_done) throw std::runtime_error("FCIDUMP: unterminated header");

  const auto norb = header_int(header, "NORB");
  const auto nelec = header_int(header, "NELEC");
  if (!norb || !nelec) throw std::runtime_error("FCIDUMP: header lacks NORB or NELEC");
  const int ms2 = header_int(header, "MS2").value_or(0);
  if (*norb < 1 || 2 * *norb > kMaxQubits) throw std::runtime_error("FCIDUMP: bad NORB");

  const int m = *norb;
  const std::size_t um = m;
  std::vector<double> t(um * um, 0.0);
  std::vector<double> v(um * um * um * um, 0.0);
  auto vi = [&](int i, int j, int k, int l) -> double& {
    return v[((i * um + j) * um + k) * um + l];
  };
  double core = 0.0;

  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    // Fortran-style exponents are legal in FCIDUMP files.
    std::replace(line.begin(), line.end(), 'D', 'E');
    std::replace(line.begin(), line.end(), 'd', 'e');
    std::istringstream ls(line);
    double value = 0;
    int i = 0, j = 0, k = 0, l = 0;
    if (!(ls >> value >> i >> j >> k >> l)) {
      throw std::runtime_error("FCIDUMP: malformed record at data line " + std::to_string(line_no));
    }
    std::string extra;
    if (ls >> extra) {
      throw std::runtime_error("FCIDUMP: trailing data at data line " + std::to_string(line_no));
    }
    for (int idx : {i, j, k, l}) {
      if (idx < 0 || idx > m) {
        throw std::runtime_error("FCIDUMP: index out of range at data line " + std::to_string(line_no));
      }
    }
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      core += value;
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0) {
        if (j != 0 || i == 0) {
          throw std::runtime_error("FCIDUMP: malformed index pattern at data line " +
                                   std::to_string(line_no));
        }
        continue;  // orbital energy record
      }
      t[(i - 1) * um + (j - 1)] = value;
      t[(j - 1) * um + (i - 1)] = value;
    } else {
      if (i == 0 || j == 0 || k == 0 || l == 0) {
        throw std::runtime_error("FCIDUMP: malformed index pattern at data line " +
                                 std::to_string(line_no));
      }
      const int a = i - 1, b = j - 1, c = k - 1, d = l - 1;
      for (auto [p, q, r, s] : {std::array{a, b, c, d}, std::array{b, a, c, d},
                                std::array{a, b, d, c}, std::array{b, a, d, c},
                                std::array{c, d, a, b}, std::array{d, c, a, b},
                                std::array{c, d, b, a}, std::array{d, c, b, a}}) {
        vi(p, q, r, s) = value;
      }
    }
  }

  FermionHamiltonian h;
  h.n_spin_orbitals = 2 * m;
  h.n_electrons = *nelec;
  h.multiplicity = std::abs(ms2) + 1;
  h.e_nuclear = core;
  const std::size_t n = h.n_spin_orbitals;
  h.h1.assign(n * n, 0.0);
  h.h2.assign(n * n * n * n, 0.0);
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) {
      for (int sp = 0; sp < 2; ++sp) h.h1[(2 * p + sp) * n + (2 * q + sp)] = t[p * um + q];
    }
  }
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) {
          const double g = vi(p, q, r, s);
          if (g == 0.0) continue;
          for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2) {
              const std::size_t P = 2 * p + s1, Q = 2 * q + s1, R = 2 * r + s2, S = 2 * s + s2;
              h.h2[((P * n + Q) * n + R) * n + S] = g;
            }
        }
  h.validate();
  return h;
}

FermionHamiltonian load_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FixtureNotFound("cannot open FCIDUMP file " + path.string());
  return parse_fcidump(in);
}

std::string to_string(MappingKind kind) {
  switch (kind) {
    case MappingKind::kJordanWigner: return "jordan_wigner";
    case MappingKind::kParity: return "parity";
    case MappingKind::kBravyiKitaev: return "bravyi_kitaev";
  }
  return "unknown";
}

MappingKind parse_mapping_kind(std::string_view name) {
  if (name == "jordan_wigner" || name == "jw") return MappingKind::kJordanWigner;
  if (name == "parity") return MappingKind::kParity;
  if (name == "bravyi_kitaev" || name == "bk") return MappingKind::kBravyiKitaev;
  throw std::invalid_argument("unknown mapping '" + std::string(name) + "'");
}

void MappingSpec::validate() const {
  if (two_qubit_reduction && kind != MappingKind::kParity) {
    throw std::invalid_argument("two-qubit reduction requires the parity mapping");
  }
}

std::vector<std::uint64_t> encoding_matrix(MappingKind kind, int n_modes) {
  std::vector<std::uint64_t> rows(n_modes, 0);
  for (int i = 0; i < n_modes; ++i) {
    switch (kind) {
      case MappingKind::kJordanWigner:
        rows[i] = std::uint64_t{1} << i;
        break;
      case MappingKind::kParity:
        rows[i] = (i == 63) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (i + 1)) - 1);
        break;
      case MappingKind::kBravyiKitaev: {
        // Fenwick tree: qubit i holds modes (i+1-lowbit(i+1)) .. i.
        const unsigned k = static_cast<unsigned>(i + 1);
        const unsigned low = k & (~k + 1);
        for (unsigned mode = k - low; mode <= static_cast<unsigned>(i); ++mode) {
          rows[i] |= std::uint64_t{1} << mode;
        }
        break;
      }
    }
  }
  return rows;
}

PauliSum ladder_operator(MappingKind kind, int n_modes, int mode, bool creation) {
  if (mode < 0 || mode >= n_modes) throw std::out_of_range("ladder_operator: mode out of range");
  const auto beta = encoding_matrix(kind, n_modes);
  const auto inv = gf2_inverse(beta);
  std::uint64_t flip = 0;  // qubits whose value depends on n_mode
  for (int i = 0; i < n_modes; ++i) {
    if ((beta[i] >> mode) & 1U) flip |= std::uint64_t{1} << i;
  }
  std::uint64_t parity = 0;  // qubits whose parity is n_0 + ... + n_{mode-1}
  for (int k = 0; k < mode; ++k) parity ^= inv[k];
  const std::uint64_t occupation = inv[mode];  // qubits whose parity is n_mode

  // a+ = X_flip Z_parity (I + Z_occ)/2 and a = X_flip Z_parity (I - Z_occ)/2:
  // sign and projector act on the incoming state, then the flip.
  const PauliString head = pauli_mul(PauliString(n_modes, flip, 0), PauliString(n_modes, 0, parity));
  PauliSum projector = PauliSum::identity(n_modes, 0.5);
  projector.add(PauliString(n_modes, 0, occupation), creation ? 0.5 : -0.5);
  return sum_mul(PauliSum(head), projector);
}

int qubit_count(const FermionHamiltonian& h, const MappingSpec& spec) {
  return h.n_spin_orbitals - (spec.two_qubit_reduction ? 2 : 0);
}

PauliSum map_to_qubits(const FermionHamiltonian& h, const MappingSpec& spec) {
  spec.validate();
  if (spec.two_qubit_reduction && (h.n_spin_orbitals < 4 || h.n_spin_orbitals % 2 != 0)) {
    throw std::invalid_argument("two-qubit reduction needs an even number (>= 4) of spin orbitals");
  }
  const FermionHamiltonian& src =
      spec.two_qubit_reduction ? permute_modes(h, block_order(h.n_spin_orbitals)) : h;
  const int n = src.n_spin_orbitals;

  std::vector<PauliSum> cr, an;
  cr.reserve(n);
  an.reserve(n);
  for (int p = 0; p < n; ++p) {
    cr.push_back(ladder_operator(spec.kind, n, p, true));
    an.push_back(ladder_operator(spec.kind, n, p, false));
  }
  std::vector<PauliSum> cc, aa;  // cc[p*n+r] = a+_p a+_r, aa[s*n+q] = a_s a_q
  cc.reserve(n * n);
  aa.reserve(n * n);
  for (int p = 0; p < n; ++p) {
    for (int r = 0; r < n; ++r) {
      cc.push_back(sum_mul(cr[p], cr[r]));
      aa.push_back(sum_mul(an[p], an[r]));
    }
  }

  Accumulator acc;
  acc.terms[{0, 0}] += src.e_nuclear;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double t = src.one_body(p, q);
      if (t != 0.0) acc.add_product(cr[p], an[q], t);
    }
  }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) {
        if (r == p) continue;
        for (int s = 0; s < n; ++s) {
          if (s == q) continue;
          const double g = src.two_body(p, q, r, s);
          if (g == 0.0) continue;
          acc.add_product(cc[p * n + r], aa[s * n + q], 0.5 * g);
        }
      }
  PauliSum full = acc.finish(n);

  if (!spec.two_qubit_reduction) return full;
  const double sign_up = (h.n_alpha() % 2) ? -1.0 : 1.0;
  const double sign_all = (h.n_electrons % 2) ? -1.0 : 1.0;
  return taper_two_qubits(full, n / 2 - 1, sign_up, n - 1, sign_all);
}

std::uint64_t hartree_fock_bitstring(const FermionHamiltonian& h, const MappingSpec& spec) {
  spec.validate();
  const int n = h.n_spin_orbitals;
  const std::uint64_t occ = occupation_mask(h, spec.two_qubit_reduction);
  const auto beta = encoding_matrix(spec.kind, n);
  std::uint64_t bits = 0;
  for (int i = 0; i < n; ++i) {
    if (parity_of(beta[i] & occ)) bits |= std::uint64_t{1} << i;
  }
  if (spec.two_qubit_reduction) bits = remove_bits(bits, n / 2 - 1, n - 1);
  return bits;
}

std::optional<double> FixtureMetadata::number(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) return std::nullopt;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw std::runtime_error("metadata: value of '" + key + "' is not a number");
  }
}

double FixtureMetadata::require_number(const std::string& key) const {
  auto v = number(key);
  if (!v) throw std::runtime_error("metadata: missing key '" + key + "'");
  return *v;
}

FixtureMetadata parse_metadata(std::istream& in) {
  FixtureMetadata meta;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("metadata: expected key=value: " + line);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    meta.values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return meta;
}

FixtureMetadata load_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FixtureNotFound("cannot open metadata file " + path.string());
  return parse_metadata(in);
}

std::filesystem::path fixture_directory() {
  if (const char* env = std::getenv("NUVQE_FIXTURE_DIR"); env && *env) return env;
  return NUVQE_DEFAULT_FIXTURE_DIR;
}

Fixture load_fixture(const std::string& id) { return load_fixture(id, fixture_directory()); }

Fixture load_fixture(const std::string& id, const std::filesystem::path& dir) {
  const auto dump = dir / (id + ".fcidump");
  const auto meta = dir / (id + ".meta");
  if (!std::filesystem::exists(dump) || !std::filesystem::exists(meta)) {
    throw FixtureNotFound("fixture '" + id + "' not found in " + dir.string());
  }
  return {id, load_fcidump(dump), load_metadata(meta)};
}

}  // namespace nuvqe
