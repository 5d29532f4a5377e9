#pragma once

#include "psps/cpp_sched.hpp"

#include <cstdint>
#include <string>

namespace psps {

/// Bundled synthetic shutoff planning problem: a Sacramento-like fire
/// season (Jun 1 - Sep 30, T = 122) over four weather channels with eight
/// bins each. The joint chain is the product of independent per-channel
/// chains, so its 4096x4096 matrix is sparse and cheap to apply.
struct PspsFixture {
    StateSpace space;
    TransitionModel model;
    RiskRule rule;
    Eigen::VectorXd risk;  // indicator f over joint states
    CostSchedule costs;    // T = 122, A=1e9, a=2e5, s1=s2=2e6, lambda=40.5e6
    int budget = 10;       // N
    std::size_t x0 = 0;    // mild late-May start state
};

PspsFixture make_psps_fixture();

/// Bundled synthetic critical-peak-pricing problem: a Quebec-like heating
/// season (Dec 1 - Mar 30, T = 120) driven by one temperature channel;
/// demand falls linearly in temperature.
struct CppFixture {
    StateSpace space;
    TransitionModel model;
    DemandModel demand;
    QuadCost quad;        // B=0.00245, C=45.5, D=8e5
    CppParams params;     // M=25, y=100
    int horizon = 120;    // T
    std::size_t x0 = 0;   // mild early-December start state
};

CppFixture make_cpp_fixture();

/// Write n_years fire seasons of daily readings
/// (date,temp_c,rh_pct,wind_kmh,gust_kmh), sampled from the fixture chains
/// with in-bin jitter. Deterministic in (n_years, seed).
void write_psps_csv(const std::string& path, int n_years, std::uint64_t seed);

/// Write n_years heating seasons of daily readings (date,temp_c,demand_mw);
/// demand is the fixture's linear model plus bounded noise. Leap-year
/// winters include Feb 29 and are one day longer.
void write_cpp_csv(const std::string& path, int n_years, std::uint64_t seed);

}  // namespace psps
