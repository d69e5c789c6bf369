#pragma once

// Place/transition nets with vector markings.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nwn/ms.hpp"

namespace nwn {

class PetriNet {
 public:
  std::string name;

  std::size_t add_place(const std::string& p);
  std::size_t add_transition(const std::string& t);
  void add_pre(std::size_t p, std::size_t t, Count w = 1);
  void add_post(std::size_t t, std::size_t p, Count w = 1);

  std::optional<std::size_t> find_place(std::string_view p) const;
  std::optional<std::size_t> find_transition(std::string_view t) const;
  std::size_t place(std::string_view p) const;
  std::size_t transition(std::string_view t) const;

  const std::vector<std::string>& places() const { return places_; }
  const std::vector<std::string>& transitions() const { return trans_; }
  std::size_t num_places() const { return places_.size(); }
  std::size_t num_transitions() const { return trans_.size(); }
  const Vec& pre(std::size_t t) const { return pre_.at(t); }
  const Vec& post(std::size_t t) const { return post_.at(t); }

  Vec marking() const { return Vec(places_.size()); }

  friend bool operator==(const PetriNet& a, const PetriNet& b) {
    return a.places_ == b.places_ && a.trans_ == b.trans_ && a.pre_ == b.pre_ && a.post_ == b.post_;
  }

 private:
  std::vector<std::string> places_, trans_;
  std::vector<Vec> pre_, post_;
  std::map<std::string, std::size_t, std::less<>> pidx_, tidx_;
};

// The empty net whose only marking is epsilon.
PetriNet empty_net();

bool pn_enabled(const PetriNet& net, const Vec& m, std::size_t t);
Vec pn_fire(const PetriNet& net, const Vec& m, std::size_t t);
Vec pn_fire(const PetriNet& net, const Vec& m, std::string_view t);

// Sum of pre (or post) vectors over a multiset of transitions.
Vec pn_pre_of(const PetriNet& net, const std::vector<Count>& tcounts);
Vec pn_post_of(const PetriNet& net, const std::vector<Count>& tcounts);

Vec marking_of(const PetriNet& net, const std::map<std::string, Count>& counts);
std::string marking_to_string(const PetriNet& net, const Vec& m);

}  // namespace nwn
