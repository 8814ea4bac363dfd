#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

namespace rl {

struct CheckItem {
  std::string name;
  bool ok = true;
  std::size_t checked = 0;
  std::string detail;  // first failure
};

struct CheckReport {
  std::vector<CheckItem> items;

  bool ok() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.ok; });
  }
  CheckItem& item(const std::string& name) {
    for (auto& c : items)
      if (c.name == name) return c;
    items.push_back({name, true, 0, {}});
    return items.back();
  }
  void expect(const std::string& name, bool cond, const std::function<std::string()>& why) {
    auto& c = item(name);
    ++c.checked;
    if (!cond && c.ok) {
      c.ok = false;
      c.detail = why();
    }
  }
  std::string summary() const {
    std::string s;
    for (const auto& c : items)
      s += c.name + ": " + (c.ok ? "ok" : "FAIL " + c.detail) + " (" + std::to_string(c.checked) + " checks)\n";
    return s;
  }
};

}  // namespace rl
