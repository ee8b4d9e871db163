#pragma once

namespace facr {
struct VRConfig;
struct VRReport;
}  // namespace facr
