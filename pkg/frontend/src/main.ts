import { ApiClient } from './api.js';
import { Store } from './store.js';
import { WizardApp } from './wizard.js';

const root = document.getElementById('app');
if (root) {
  const app = new WizardApp(root as HTMLElement, new ApiClient(''), new Store());
  app.mount();
}
