import { SynthesisClient } from "./api.js";
import { DemoApp } from "./app.js";

const serviceUrl =
  new URLSearchParams(window.location.search).get("service") ??
  "http://127.0.0.1:8321";

const root = document.getElementById("app");
if (root) {
  const app = new DemoApp(root, new SynthesisClient(serviceUrl));
  void app.init();
}
