#pragma once

namespace hardy {

/// Exit codes: 0 success, 1 validation failure, 2 usage error.
int cli_main(int argc, char** argv);

}  // namespace hardy
