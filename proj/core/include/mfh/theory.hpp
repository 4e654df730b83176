#pragma once

#include <cstdint>

namespace mfh::theory {

/// Symbol error probability of noncoherent detection among `m` orthogonal
/// signals at symbol SNR `es_n0` (linear), by quadrature over the Rician
/// envelope of the correct bin.
double noncoherent_orthogonal_ser(std::int64_t m, double es_n0);

/// Per-sample Es/N0 (dB) at which a length-P symbol with P-ary noncoherent
/// detection reaches `target_ser`.
double esn0_db_at_ser(std::int64_t p, double target_ser);

}  // namespace mfh::theory
