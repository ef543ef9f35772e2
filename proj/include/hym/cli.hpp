#pragma once

namespace hym::cli {

enum Exit : int { kPass = 0, kCheckFailure = 1, kUsage = 2, kNumericalAbort = 3 };

// Entry point of the hymtk tool: verify <suite>, flow <config.json>, report <files...>.
int run(int argc, char** argv);

}  // namespace hym::cli
