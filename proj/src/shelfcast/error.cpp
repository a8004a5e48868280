#include "shelfcast/error.hpp"

namespace shelfcast {

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace shelfcast
