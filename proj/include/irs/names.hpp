#pragma once

#include <stdexcept>
#include <string>

#include "irs/inner.hpp"
#include "irs/policies.hpp"

namespace irs {

inline std::string policy_name(PolicyKind k) {
    switch (k) {
        case PolicyKind::kTs: return "ts";
        case PolicyKind::kIrsFh: return "irs-fh";
        case PolicyKind::kIrsVZero: return "irs-v-zero";
        case PolicyKind::kIrsVEmax: return "irs-v-emax";
        case PolicyKind::kIrsIndex: return "irs-index";
        case PolicyKind::kIrsIndexStar: return "irs-index-star";
        case PolicyKind::kBayesUcb: return "bayes-ucb";
        case PolicyKind::kOptDp: return "opt-dp";
    }
    return "?";
}

inline PolicyKind parse_policy(const std::string& s) {
    if (s == "ts") return PolicyKind::kTs;
    if (s == "irs-fh") return PolicyKind::kIrsFh;
    if (s == "irs-v-zero") return PolicyKind::kIrsVZero;
    if (s == "irs-v-emax") return PolicyKind::kIrsVEmax;
    if (s == "irs-index") return PolicyKind::kIrsIndex;
    if (s == "irs-index-star") return PolicyKind::kIrsIndexStar;
    if (s == "bayes-ucb") return PolicyKind::kBayesUcb;
    if (s == "opt-dp") return PolicyKind::kOptDp;
    throw std::invalid_argument("unknown policy: " + s);
}

inline std::string penalty_name(PenaltyKind k) {
    switch (k) {
        case PenaltyKind::kTs: return "ts";
        case PenaltyKind::kIrsFh: return "irs-fh";
        case PenaltyKind::kIrsVZero: return "irs-v-zero";
        case PenaltyKind::kIrsVEmax: return "irs-v-emax";
    }
    return "?";
}

inline PenaltyKind parse_penalty(const std::string& s) {
    if (s == "ts") return PenaltyKind::kTs;
    if (s == "irs-fh") return PenaltyKind::kIrsFh;
    if (s == "irs-v-zero") return PenaltyKind::kIrsVZero;
    if (s == "irs-v-emax") return PenaltyKind::kIrsVEmax;
    throw std::invalid_argument("unknown penalty: " + s);
}

}  // namespace irs
