#pragma once

#include <iosfwd>
#include <memory>

#include "pmchat/llmgateway.hpp"

namespace pmchat {

/// Runs the pmchat command line. Returns the process exit code; contract
/// violations print "error [code]: message" to err and return 1.
/// A null transport means "build one from the PMCHAT_* environment".
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err,
            std::shared_ptr<Transport> transport = nullptr);

}  // namespace pmchat
