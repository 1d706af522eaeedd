import { HttpApi } from "./api";
import { SearchStore } from "./store";
import { View } from "./view";

const api = new HttpApi();
const store = new SearchStore(api);
const view = new View(store);

const input = document.getElementById("typeahead") as HTMLInputElement;
const generate = document.getElementById("generate") as HTMLButtonElement;

let timer: number | undefined;
input.addEventListener("input", () => {
  window.clearTimeout(timer);
  const text = input.value.trim();
  if (text.length < 2) {
    view.clearMatches();
    return;
  }
  timer = window.setTimeout(() => {
    api
      .searchMembers(text, 8)
      .then((members) => view.showMatches(members))
      .catch(() => view.clearMatches());
  }, 150);
});

input.addEventListener("keydown", (event) => {
  if (event.key === "Escape") view.clearMatches();
});

generate.addEventListener("click", () => {
  view.clearMatches();
  void store.generate();
});
