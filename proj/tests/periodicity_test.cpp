#include "partmod/periodicity.hpp"

#include <cstdint>

#include <gtest/gtest.h>

#include "partmod/errors.hpp"
#include "partmod/numtheory.hpp"
#include "partmod/residue_engine.hpp"
#include "partmod/sequences.hpp"

namespace partmod {
namespace {

TEST(FundamentalPeriod, GeometricPartsHavePeriodMToTheK) {
  for (std::uint32_t m : {2u, 3u, 5u}) {
    const PartSequence seq = PartSequence::mary(m);
    for (std::uint32_t k = 2; k <= 4; ++k) {
      const PeriodCert cert = fundamental_period(seq, k, m);
      EXPECT_EQ(cert.fundamental_period, pow_u64(m, k)) << "m=" << m << " k=" << k;
    }
  }
}

TEST(FundamentalPeriod, GeometricPartsCompositeBase) {
  // The m^k value must come out of the per-prime assembly for composite m too.
  for (std::uint32_t k = 2; k <= 4; ++k)
    EXPECT_EQ(fundamental_period(PartSequence::mary(6), k, 6).fundamental_period, pow_u64(6, k));
  // Confirm by scan for a small case.
  const PeriodCert cert = certify(PartSequence::mary(6), 2, 6);
  EXPECT_EQ(cert.fundamental_period, 36);
  EXPECT_EQ(cert.verification, "verified");
}

TEST(FundamentalPeriod, SinglePartIsItsOwnPeriod) {
  // k = 1: the count is the indicator of multiples of a_1, under any modulus.
  EXPECT_EQ(fundamental_period(PartSequence::explicit_list({5}), 1, 3).fundamental_period, 5);
  EXPECT_EQ(fundamental_period(PartSequence::explicit_list({4}), 1, 8).fundamental_period, 4);
  EXPECT_EQ(fundamental_period(PartSequence::power(2), 1, 4).fundamental_period, 1);
  EXPECT_EQ(fundamental_period(PartSequence::mary(3), 1, 3).fundamental_period, 1);
  for (std::uint32_t m : {2u, 3u, 4u, 8u, 9u, 12u}) {
    const PeriodCert cert = certify(PartSequence::explicit_list({6}), 1, m);
    EXPECT_EQ(cert.fundamental_period, 6) << "m=" << m;
    EXPECT_EQ(cert.verification, "verified") << "m=" << m;
  }
}

TEST(FundamentalPeriod, SquarePartsEvidence) {
  const PeriodCert cert = fundamental_period(PartSequence::power(2), 3, 2);
  EXPECT_EQ(cert.fundamental_period, 72);
  EXPECT_EQ(cert.parts, (std::vector<std::uint64_t>{1, 4, 9}));
  ASSERT_EQ(cert.per_prime.size(), 1u);
  const PrimePowerPeriod& pp = cert.per_prime[0];
  EXPECT_EQ(pp.prime, 2u);
  EXPECT_EQ(pp.alpha, 1u);
  EXPECT_EQ(pp.p_free_lcm, 9);
  EXPECT_EQ(pp.e_values, (std::vector<std::uint32_t>{0, 2, 0}));
  EXPECT_EQ(pp.power_sum, 6);  // 2^0 + 2^2 + 2^0
  EXPECT_EQ(pp.b, 3u);         // least b with 2^b >= 6
  EXPECT_EQ(pp.period, 72);
  EXPECT_EQ(cert.coarse_bound, 4 * 36);  // m^(k-1) * lcm(1,4,9)
}

TEST(FundamentalPeriod, PerPrimeStructureHolds) {
  for (const char* spec : {"power:2", "triangular", "pentagonal", "mary:2", "list:2,6,9,11"}) {
    const PartSequence seq = PartSequence::parse(spec);
    for (std::uint32_t k = 2; k <= 4; ++k) {
      for (std::uint32_t m : {2u, 4u, 6u, 9u, 12u}) {
        const PeriodCert cert = fundamental_period(seq, k, m);
        const mpz_class full_lcm = lcm_list(cert.parts);
        mpz_class combined = 1;
        for (const PrimePowerPeriod& pp : cert.per_prime) {
          // L is the p-free part of lcm(parts).
          EXPECT_FALSE(mpz_divisible_ui_p(pp.p_free_lcm.get_mpz_t(), pp.prime));
          mpz_class L;
          mpz_remove(L.get_mpz_t(), full_lcm.get_mpz_t(), mpz_class(pp.prime).get_mpz_t());
          EXPECT_EQ(pp.p_free_lcm, L);
          // The per-prime period is exactly p^(alpha+b-1) * L for k >= 2.
          EXPECT_EQ(pp.period, pow_u64(pp.prime, pp.alpha + pp.b - 1) * pp.p_free_lcm)
              << spec << " k=" << k << " m=" << m << " p=" << pp.prime;
          // b is minimal: p^b >= power_sum > p^(b-1).
          EXPECT_GE(pow_u64(pp.prime, pp.b), pp.power_sum);
          if (pp.b > 0) EXPECT_LT(pow_u64(pp.prime, pp.b - 1), pp.power_sum);
          mpz_lcm(combined.get_mpz_t(), combined.get_mpz_t(), pp.period.get_mpz_t());
        }
        EXPECT_EQ(cert.fundamental_period, combined);
        EXPECT_TRUE(mpz_divisible_p(cert.coarse_bound.get_mpz_t(),
                                    cert.fundamental_period.get_mpz_t()));
        EXPECT_EQ(cert.coarse_bound, pow_u64(m, k - 1) * full_lcm);
      }
    }
  }
}

TEST(FundamentalPeriod, CompositeModulusIsLcmOfPrimePowerRuns) {
  const PartSequence seq = PartSequence::power(2);
  for (std::uint32_t k = 1; k <= 4; ++k) {
    const mpz_class t12 = fundamental_period(seq, k, 12).fundamental_period;
    const mpz_class t4 = fundamental_period(seq, k, 4).fundamental_period;
    const mpz_class t3 = fundamental_period(seq, k, 3).fundamental_period;
    mpz_class combined;
    mpz_lcm(combined.get_mpz_t(), t4.get_mpz_t(), t3.get_mpz_t());
    EXPECT_EQ(t12, combined) << "k=" << k;
  }
}

TEST(FundamentalPeriod, ArgumentValidation) {
  EXPECT_THROW(fundamental_period(PartSequence::power(2), 0, 2), std::invalid_argument);
  EXPECT_THROW(fundamental_period(PartSequence::power(2), 2, 1), std::invalid_argument);
}

TEST(VerifyPeriod, AlternatingWindow) {
  // Parts {2}: pattern 1,0,1,0,... under mod 2.
  const ResidueWindow w = compute_residues(PartSequence::explicit_list({2}), 1, 2, 6);
  const PeriodVerdict good = verify_period(w, 2);
  EXPECT_TRUE(good.is_period);
  EXPECT_TRUE(good.is_minimal);
  const PeriodVerdict shifted = verify_period(w, 1);
  EXPECT_FALSE(shifted.is_period);
  EXPECT_FALSE(shifted.is_minimal);
  EXPECT_THROW(verify_period(w, 4), std::invalid_argument);  // needs 8 values, has 6
  EXPECT_THROW(verify_period(w, 0), std::invalid_argument);
}

TEST(VerifyPeriod, DetectsNonMinimalCandidates) {
  const ResidueWindow w = compute_residues(PartSequence::explicit_list({1}), 1, 2, 12);
  const PeriodVerdict v = verify_period(w, 4);  // all ones: 4 is a period, 1 is minimal
  EXPECT_TRUE(v.is_period);
  EXPECT_FALSE(v.is_minimal);
  EXPECT_TRUE(verify_period(w, 1).is_minimal);
}

TEST(VerifyPeriod, ConfirmsSquarePartsExample) {
  const ResidueWindow w = compute_residues(PartSequence::power(2), 3, 2, 144);
  const PeriodVerdict v = verify_period(w, 72);
  EXPECT_TRUE(v.is_period);
  EXPECT_TRUE(v.is_minimal);
}

TEST(VerifyPeriod, FormulaAgreesWithScansOnAGrid) {
  for (const char* spec : {"power:2", "triangular", "pentagonal", "mary:2", "mary:3"}) {
    const PartSequence seq = PartSequence::parse(spec);
    for (std::uint32_t k = 1; k <= 4; ++k) {
      for (std::uint32_t m : {2u, 3u}) {
        const PeriodCert cert = fundamental_period(seq, k, m);
        const std::uint64_t T = to_u64(cert.fundamental_period, "period");
        const ResidueWindow w = compute_residues(seq, k, m, 2 * T);
        const PeriodVerdict v = verify_period(w, T);
        EXPECT_TRUE(v.is_period) << spec << " k=" << k << " m=" << m;
        EXPECT_TRUE(v.is_minimal) << spec << " k=" << k << " m=" << m;
      }
    }
  }
}

TEST(Certify, MarksScannedCertificates) {
  const PeriodCert cert = certify(PartSequence::power(2), 3, 2);
  EXPECT_EQ(cert.fundamental_period, 72);
  EXPECT_EQ(cert.verification, "verified");
}

TEST(Certify, FallsBackToFormulaOnlyUnderTightMemory) {
  ComputeOptions opts;
  opts.memory_cap = 16;  // the scan would need 2 * 72 bytes
  const PeriodCert cert = certify(PartSequence::power(2), 3, 2, opts);
  EXPECT_EQ(cert.fundamental_period, 72);
  EXPECT_EQ(cert.verification, "formula-only");
}

TEST(PeriodCertJson, CarriesTheEvidence) {
  const json doc = to_json(certify(PartSequence::power(2), 3, 2));
  EXPECT_EQ(doc.at("seq"), "power:2");
  EXPECT_EQ(doc.at("fundamental_period"), 72);
  EXPECT_EQ(doc.at("coarse_bound"), 144);
  EXPECT_EQ(doc.at("verification"), "verified");
  ASSERT_EQ(doc.at("per_prime").size(), 1u);
  EXPECT_EQ(doc.at("per_prime")[0].at("b"), 3);
  EXPECT_EQ(doc.at("per_prime")[0].at("p_free_lcm"), 9);
}

TEST(PeriodCertJson, BigPeriodsBecomeDecimalStrings) {
  // Values within 64 bits stay numeric.
  const json small = to_json(fundamental_period(PartSequence::mary(3), 20, 3));
  EXPECT_TRUE(small.at("fundamental_period").is_number_unsigned());
  // Squares at k = 25 give a formula period beyond 2^64; it must round-trip
  // through a decimal string.
  const PeriodCert wide = fundamental_period(PartSequence::power(2), 25, 2);
  EXPECT_GT(wide.fundamental_period, mpz_class("18446744073709551615"));
  const json doc = to_json(wide);
  ASSERT_TRUE(doc.at("fundamental_period").is_string());
  EXPECT_EQ(mpz_class(doc.at("fundamental_period").get<std::string>()),
            wide.fundamental_period);
}

}  // namespace
}  // namespace partmod
