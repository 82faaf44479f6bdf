#pragma once

#include "filippov/psys.hpp"

namespace filippov {

/// One-dimensional chart on Σ. Chart value c = orientation * x, and param(c) solves h(x, y) = 0 for y.
class SigmaChart {
public:
    SigmaChart() = default;
    /// `y_hint` seeds the Newton solve for y when h is nonlinear in y.
    SigmaChart(SwitchingFunction sw, int orientation = 1, double y_hint = 0.0)
        : sw_(std::move(sw)), orientation_(orientation >= 0 ? 1 : -1), y_hint_(y_hint) {}

    Vec2 param(double c) const;
    double inverse(Vec2 p) const { return orientation_ * p.x; }
    int orientation() const { return orientation_; }
    /// Rate of change of the chart value along velocity v.
    double component(Vec2 v) const { return orientation_ * v.x; }
    /// Unit tangent of Σ pointing toward larger chart values.
    Vec2 tangent(double c) const;
    /// One Newton step along ∇h that brings p back onto Σ.
    Vec2 project(Vec2 p) const;
    const SwitchingFunction& sw() const { return sw_; }

private:
    SwitchingFunction sw_;
    int orientation_ = 1;
    double y_hint_ = 0.0;
};

}  // namespace filippov
