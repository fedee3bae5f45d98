#pragma once
// Generated by oracles/generate.py; do not edit.
namespace ref {
inline constexpr double kSemiDeltaE[] = {-3.1, -1.55, -0.4, 0.2, 0.95, 1.9, 2.5};
inline constexpr double kSemiDelta[] = {-0.45134548007625306691, -1.47875, -0.507, 2.6522680892391281165e-32, 0.63375, 1.4365, 0.73364412015314815845};
inline constexpr double kSemiLag[] = {0.0, 0.37, 1.5, 6.25, 23.1, 71.9};
inline constexpr double kSemiKernelRe[] = {1.3689, 1.2908494140264159784, 0.42778420187553563682, -0.016062954933636958663, -0.000027872558208041878156, -0.000059583550789171981784};
inline constexpr double kSemiKernelIm[] = {0.0, -0.09569760046112485724, -0.13232916065042414695, 0.048342582040899138481, 0.00030082818076193831021, -0.0002405263466787104648};
inline constexpr double kTabX[] = {-1.5, -1.0, -0.2, 0.5, 1.2, 2.0};
inline constexpr double kTabY[] = {0.0, 0.8, 1.1, 0.4, 0.9, 0.0};
inline constexpr double kTabDeltaE[] = {-2.7, -0.6, 0.1, 0.85, 1.6, 3.3};
inline constexpr double kTabDelta[] = {-0.14262638243672671249, -0.19660435940678750682, 0.16243377138269602127, 0.04161314471612002719, 0.37876732690234889439, 0.12651891325763708492};
inline constexpr double kTabLag[] = {0.0, 0.8, 4.4, 17.0};
inline constexpr double kTabKernelRe[] = {0.36605636911135927227, 0.28346631886472079423, 0.015532420619907838278, -0.00062540392200324998429};
inline constexpr double kTabKernelIm[] = {0.0, -0.026875186294508716975, 0.024584145174254318321, -0.001089537311820630549};
inline constexpr double kTabBound[] = {2.5778523710337283762, 0.9036032716290156649};
inline constexpr double kU0Time[] = {0.5, 3.0, 12.0, 40.0};
inline constexpr double kU0Re[] = {0.23904379883786196883, -0.64427750449159381981, -0.81883946723027573451, -0.81652054571969456036};
inline constexpr double kU0Im[] = {-0.86309172961969560386, -0.54241556172715515457, 0.20130395849351697819, -0.1990958217532714031};
inline constexpr double kBesselJ1FirstZeroHalf[] = {1.9158529851037561578};
}  // namespace ref
