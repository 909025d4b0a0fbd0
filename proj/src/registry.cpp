// SPDX-License-Identifier: Apache-2.0
#include "brain/registry.hpp"

#include <mutex>

#include "brain/error.hpp"

namespace brain {

Registry::Registry(const Registry& other) {
  std::shared_lock lock(other.mutex_);
  providers_ = other.providers_;
  by_family_ = other.by_family_;
}

Registry& Registry::operator=(const Registry& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_);
  std::shared_lock other_lock(other.mutex_);
  providers_ = other.providers_;
  by_family_ = other.by_family_;
  return *this;
}

void Registry::add(Provider provider) {
  if (provider.id.empty()) throw Error(Errc::schema_violation, "provider", "empty id");
  if (provider.family.empty()) throw Error(Errc::schema_violation, provider.id, "empty family");
  std::unique_lock lock(mutex_);
  if (providers_.contains(provider.id)) throw Error(Errc::duplicate_provider, provider.id);
  by_family_[provider.family].insert(provider.id);
  auto id = provider.id;
  providers_.emplace(std::move(id), std::move(provider));
}

std::optional<Provider> Registry::find(std::string_view id) const {
  std::shared_lock lock(mutex_);
  auto it = providers_.find(id);
  if (it == providers_.end()) return std::nullopt;
  return it->second;
}

Provider Registry::get(std::string_view id) const {
  if (auto p = find(id)) return std::move(*p);
  throw Error(Errc::unknown_provider, std::string(id));
}

std::vector<Provider> Registry::providers() const {
  std::shared_lock lock(mutex_);
  std::vector<Provider> out;
  for (const auto& [family, ids] : by_family_) {
    for (const auto& id : ids) out.push_back(providers_.find(id)->second);
  }
  return out;
}

std::vector<Provider> Registry::family(std::string_view family) const {
  std::shared_lock lock(mutex_);
  std::vector<Provider> out;
  auto it = by_family_.find(family);
  if (it == by_family_.end()) return out;
  for (const auto& id : it->second) out.push_back(providers_.find(id)->second);
  return out;
}

std::set<std::string> Registry::families() const {
  std::shared_lock lock(mutex_);
  std::set<std::string> out;
  for (const auto& [family, ids] : by_family_) out.insert(family);
  return out;
}

std::size_t Registry::size() const {
  std::shared_lock lock(mutex_);
  return providers_.size();
}

bool Registry::index_consistent() const {
  std::shared_lock lock(mutex_);
  std::map<std::string, std::set<std::string>, std::less<>> expected;
  for (const auto& [id, p] : providers_) expected[p.family].insert(id);
  return expected == by_family_;
}

std::vector<Provider> discover(const Registry& reg, std::string_view task, const std::vector<DiscoveryRule>& rules) {
  std::vector<const DiscoveryRule*> applicable;
  for (const auto& r : rules) {
    if (r.task == task) applicable.push_back(&r);
  }
  std::vector<Provider> out;
  for (auto& p : reg.providers()) {
    bool ok = true;
    for (const auto* r : applicable) {
      if ((r->family && *r->family != p.family) || !eval_expr(r->predicate, p.attributes)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(std::move(p));
  }
  return out;
}

Registry load_providers(std::string_view xml_text) {
  const auto root = xml::parse(xml_text);
  if (root.name != "providers") throw Error(Errc::schema_violation, root.name, "expected <providers>");
  Registry reg;
  for (const auto& el : root.children) {
    if (el.name != "provider") throw Error(Errc::schema_violation, "providers/" + el.name, "unknown element");
    Provider p;
    p.id = el.attribute("id");
    p.family = el.attribute("family");
    p.endpoint = el.optional_attribute("endpoint").value_or("");
    for (const auto& a : el.children) {
      if (a.name != "attr") throw Error(Errc::schema_violation, p.id + "/" + a.name, "unknown element");
      auto [path, value] = parse_scalar_element(a);
      if (!p.attributes.emplace(std::move(path), std::move(value)).second) {
        throw Error(Errc::schema_violation, p.id + "/" + a.attribute("path"), "duplicate attribute");
      }
    }
    reg.add(std::move(p));
  }
  return reg;
}

std::string serialize_providers(const Registry& reg) {
  xml::Element root("providers");
  for (const auto& p : reg.providers()) {
    xml::Element el("provider");
    el.set("id", p.id).set("family", p.family).set("endpoint", p.endpoint);
    for (const auto& [path, value] : p.attributes) el.add(scalar_element("attr", path, value));
    root.add(std::move(el));
  }
  return xml::write(root);
}

}  // namespace brain
