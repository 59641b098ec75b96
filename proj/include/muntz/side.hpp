#pragma once

namespace muntz {

/// Left operators act on [0,x], right operators on [x,b].
enum class Side { Left, Right };

}  // namespace muntz
