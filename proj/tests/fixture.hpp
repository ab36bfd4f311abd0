#pragma once

#include <gtest/gtest.h>

#include <string>

#include "rslat/kbio.hpp"

namespace fixture {

inline rslat::EvidenceDocument lbp_document() { return rslat::parse_evidence(rslat::read_file(RSLAT_FIXTURE)); }

inline rslat::Lattice lbp_kb(rslat::Rounding rounding = rslat::Rounding::round2) {
  rslat::BuildOptions opts;
  opts.rounding = rounding;
  return rslat::build_from_document(lbp_document(), opts);
}

inline rslat::Label L(const char* s) { return rslat::Label::parse(s); }

template <typename Fn>
::testing::AssertionResult raises(rslat::ErrorCode code, Fn&& fn) {
  try {
    fn();
  } catch (const rslat::Error& e) {
    if (e.code() == code) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "raised " << e.what();
  }
  return ::testing::AssertionFailure() << "nothing raised";
}

}  // namespace fixture
