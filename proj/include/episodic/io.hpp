#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "episodic/event.hpp"
#include "episodic/schema.hpp"

namespace episodic {

// Episode files:
//   episode <id> <class>
//     state(m1)=warmup, near(m1,m2) @ [0,5]
//     temp(m1)=high @ [3:noon,9]
// Blank lines separate episodes, `#` starts a comment. Marks may carry a
// calendar tag after a colon.
std::vector<Episode> parse_episodes(std::istream& in, const Schema& schema);
std::vector<Episode> load_episodes(const std::string& path, const Schema& schema);

void write_episodes(std::ostream& out, const std::vector<Episode>& episodes);
// Atomic: temp file then rename.
void save_episodes(const std::string& path, const std::vector<Episode>& episodes);

// Writes `text` to `path` through a temp file and rename.
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace episodic
